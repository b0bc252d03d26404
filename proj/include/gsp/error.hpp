#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gsp {

/// Input errors are caller mistakes (bad labels, missing samples, size
/// guards). Model errors mean the data does not satisfy the recovery
/// hypotheses (rank deficiency, complex roots, colliding eigenvalues).
enum class ErrorKind { input, model };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), kind_(kind), stage_(std::move(stage)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& stage() const noexcept { return stage_; }

    /// Labels that were required but absent (missing samples).
    const std::vector<std::string>& missing() const noexcept { return missing_; }
    /// Singular values of the offending matrix, when a rank test failed.
    const std::vector<double>& singular_values() const noexcept { return singular_values_; }

    Error& with_missing(std::vector<std::string> labels) {
        missing_ = std::move(labels);
        return *this;
    }
    Error& with_singular_values(std::vector<double> sv) {
        singular_values_ = std::move(sv);
        return *this;
    }

private:
    ErrorKind kind_;
    std::string stage_;
    std::vector<std::string> missing_;
    std::vector<double> singular_values_;
};

[[noreturn]] inline void throw_input(std::string stage, const std::string& what) {
    throw Error(ErrorKind::input, std::move(stage), what);
}

[[noreturn]] inline void throw_model(std::string stage, const std::string& what) {
    throw Error(ErrorKind::model, std::move(stage), what);
}

}  // namespace gsp
