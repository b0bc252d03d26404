#pragma once

namespace gsp {

/// Every numerical threshold used by the library. Relative thresholds are
/// measured against the scale noted next to each field.
struct Tolerances {
    double symmetry = 1e-12;          // |L - L^T| entrywise, eigendecompose input check
    double jacobi_offdiag = 1e-12;    // off-diagonal Frobenius norm vs ||L||_F
    double sign_entry = 1e-8;         // eigenvector entries below this are skipped for sign fixing
    double eigen_tie = 1e-9;          // eigenvalues closer than this (times 1+|lambda|) count as tied
    double hankel_rank = 1e-10;       // singular values vs sigma_max
    double kernel_last = 1e-12;       // last kernel coordinate vs kernel vector norm
    double imag_part = 1e-8;          // |Im| vs 1+|Re| when accepting a real root
    double root_cluster = 1e-8;       // merge roots closer than this times 1+max|lambda|
    double rank_certificate = 1e-10;  // sigma_min vs sigma_max
    double decode_residual = 1e-9;    // least-squares residual vs ||f_W||
    double minor = 1e-10;             // |det| vs product of row norms
    double nullity = 1e-9;            // eigenvalue vs max(1, lambda_max)
    double harmonic_residual = 1e-8;  // split residual vs max|f| on the valid domain
    double zero_signal = 1e-10;       // operator output vs (1+||T||)*max|f|

    /// Multiplies every threshold by `factor`.
    Tolerances scaled(double factor) const {
        Tolerances t = *this;
        for (double* p : {&t.symmetry, &t.jacobi_offdiag, &t.sign_entry, &t.eigen_tie, &t.hankel_rank,
                          &t.kernel_last, &t.imag_part, &t.root_cluster, &t.rank_certificate,
                          &t.decode_residual, &t.minor, &t.nullity, &t.harmonic_residual,
                          &t.zero_signal}) {
            *p *= factor;
        }
        return t;
    }
};

}  // namespace gsp
