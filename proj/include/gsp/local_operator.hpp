#pragma once

#include <gsp/error.hpp>

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsp {

/// Values attached to a subset of the operator's index set.
using IndexField = std::map<std::size_t, double>;

/// Bounded BFS ball around `centre` in the operator's metric graph.
struct Ball {
    std::size_t centre = 0;
    std::size_t radius = 0;
    std::map<std::size_t, std::size_t> distance;  // member -> d(centre, member)

    bool contains(std::size_t i, std::size_t r) const {
        auto it = distance.find(i);
        return it != distance.end() && it->second <= r;
    }

    std::vector<std::size_t> members(std::size_t r) const {
        std::vector<std::size_t> out;
        for (auto [i, d] : distance)
            if (d <= r) out.push_back(i);
        return out;
    }
};

/// A symmetric operator stored row-wise together with the metric graph that
/// bounds its stencil. Construction verifies that every off-diagonal entry
/// couples metric neighbours, so one application shrinks the region of
/// valid values by exactly one ring.
class LocalOperator {
public:
    using Entry = std::pair<std::size_t, double>;

    LocalOperator(const Eigen::SparseMatrix<double>& op, std::vector<std::vector<std::size_t>> metric,
                  std::vector<std::string> labels)
        : metric_(std::move(metric)), labels_(std::move(labels)) {
        const auto n = static_cast<std::size_t>(op.rows());
        if (op.cols() != op.rows() || metric_.size() != n || labels_.size() != n) {
            throw_input("local_operator", "operator, metric and labels disagree in size");
        }
        rows_.resize(n);
        std::vector<double> row_abs(n, 0.0);
        Eigen::SparseMatrix<double, Eigen::RowMajor> rm = op;
        for (Eigen::Index i = 0; i < rm.outerSize(); ++i) {
            const auto row = static_cast<std::size_t>(i);
            for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(rm, i); it; ++it) {
                if (it.value() == 0.0) continue;
                const auto col = static_cast<std::size_t>(it.col());
                if (col != row && !is_metric_neighbour(row, col)) {
                    throw_input("local_operator", "entry (" + labels_[row] + ", " + labels_[col] +
                                                      ") couples indices at metric distance > 1");
                }
                rows_[row].emplace_back(col, it.value());
                row_abs[row] += std::abs(it.value());
            }
        }
        for (double sum : row_abs) norm_ = std::max(norm_, sum);
    }

    std::size_t size() const noexcept { return rows_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::span<const Entry> row(std::size_t i) const { return rows_.at(i); }
    std::span<const std::size_t> metric_neighbours(std::size_t i) const { return metric_.at(i); }
    /// Max absolute row sum (operator infinity norm).
    double norm() const noexcept { return norm_; }

    Ball ball(std::size_t centre, std::size_t radius) const {
        if (centre >= size()) throw_input("ball", "centre index out of range");
        Ball b{centre, radius, {}};
        b.distance[centre] = 0;
        std::queue<std::size_t> queue;
        queue.push(centre);
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop();
            const std::size_t du = b.distance[u];
            if (du == radius) continue;
            for (std::size_t w : metric_[u]) {
                if (b.distance.emplace(w, du + 1).second) queue.push(w);
            }
        }
        return b;
    }

    /// Copies `samples` on the ball of radius `r`; throws listing every
    /// missing label.
    IndexField gather(const IndexField& samples, const Ball& b, std::size_t r, const char* stage) const {
        IndexField field;
        std::vector<std::string> missing;
        for (std::size_t i : b.members(r)) {
            auto it = samples.find(i);
            if (it == samples.end()) {
                missing.push_back(labels_[i]);
            } else {
                field[i] = it->second;
            }
        }
        if (!missing.empty()) {
            std::string list;
            for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
            throw Error(ErrorKind::input, stage, "missing samples at " + list).with_missing(std::move(missing));
        }
        return field;
    }

    /// ((T - shift I) h) * scale on the ball of radius r-1, given h on radius r.
    IndexField apply(const IndexField& h, const Ball& b, std::size_t r, double shift = 0.0,
                     double scale = 1.0) const {
        IndexField out;
        if (r == 0) return out;
        for (std::size_t w : b.members(r - 1)) {
            double acc = -shift * h.at(w);
            for (auto [col, value] : rows_[w]) acc += value * h.at(col);
            out[w] = acc * scale;
        }
        return out;
    }

    /// g(k) = (T^k f)(centre), k = 0..K, from samples on N(centre, K).
    std::vector<double> moments(const IndexField& samples, std::size_t centre, std::size_t K) const {
        const Ball b = ball(centre, K);
        IndexField h = gather(samples, b, K, "moments");
        std::vector<double> g{h.at(centre)};
        for (std::size_t k = 1; k <= K; ++k) {
            h = apply(h, b, K - k + 1);
            g.push_back(h.at(centre));
        }
        return g;
    }

private:
    bool is_metric_neighbour(std::size_t i, std::size_t j) const {
        for (std::size_t w : metric_[i])
            if (w == j) return true;
        return false;
    }

    std::vector<std::vector<Entry>> rows_;
    std::vector<std::vector<std::size_t>> metric_;
    std::vector<std::string> labels_;
    double norm_ = 0.0;
};

}  // namespace gsp
