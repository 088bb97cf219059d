#pragma once

// Dense symmetric linear algebra used by the greedy removal algorithms:
// PSD checks, Cholesky inversion, symmetric square roots, trace
// contractions, and the two inverse-downdate identities.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "subsel/error.hpp"
#include "subsel/tolerances.hpp"

namespace subsel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace detail {

inline std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

inline double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Ascending eigenvalues of a symmetric matrix.
inline Vector eigenvalues(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace detail

/// Dense symmetric n x n matrix. Construction checks squareness and
/// symmetry (relative to the largest entry) and stores the exactly
/// symmetrized average.
class SymMatrix {
public:
    explicit SymMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() < 1 || m_.rows() != m_.cols()) {
            throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square with n >= 1, got " + detail::shape(m_));
        }
        if (!m_.allFinite()) {
            throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
        }
        const double scale = detail::max_abs(m_);
        const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
        if (asym > tol::sym * scale) {
            throw Error(ErrorKind::NotSymmetric, "asymmetry " + std::to_string(asym) + " exceeds tolerance");
        }
        m_ = 0.5 * (m_ + m_.transpose()).eval();
    }

    static SymMatrix identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }
    static SymMatrix zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }

    Index dim() const noexcept { return m_.rows(); }
    const Matrix& matrix() const noexcept { return m_; }
    double operator()(Index i, Index j) const { return m_(i, j); }
    double trace() const { return m_.trace(); }

private:
    Matrix m_;
};

/// One PSD summand, either as an explicit symmetric matrix or as a tall
/// factor G with block = G G^t.
class PsdBlock {
public:
    struct Factor {
        Matrix g;
    };

    static PsdBlock explicit_form(SymMatrix m, std::string label = {}) {
        return PsdBlock(std::move(m), std::move(label));
    }

    static PsdBlock factor_form(Matrix g, std::string label = {}) {
        if (g.rows() < 1 || g.cols() < 1) {
            throw Error(ErrorKind::DimensionMismatch, "factor must be n x r with n, r >= 1, got " + detail::shape(g));
        }
        if (!g.allFinite()) {
            throw Error(ErrorKind::InvalidArgument, "factor has non-finite entries");
        }
        return PsdBlock(Factor{std::move(g)}, std::move(label));
    }

    static PsdBlock rank_one(const Vector& v, std::string label = {}) {
        return factor_form(Matrix(v), std::move(label));
    }

    static PsdBlock zero(Index n) { return explicit_form(SymMatrix::zero(n)); }

    bool is_factor() const noexcept { return std::holds_alternative<Factor>(form_); }

    Index dim() const noexcept {
        return is_factor() ? std::get<Factor>(form_).g.rows() : std::get<SymMatrix>(form_).dim();
    }

    const Matrix& factor() const { return std::get<Factor>(form_).g; }
    const SymMatrix& explicit_matrix() const { return std::get<SymMatrix>(form_); }
    const std::string& label() const noexcept { return label_; }

    Matrix dense() const {
        if (is_factor()) {
            const Matrix& g = factor();
            return g * g.transpose();
        }
        return explicit_matrix().matrix();
    }

    /// Smallest eigenvalue relative to the largest one; factor blocks are
    /// PSD by construction and report 0.
    double relative_min_eigenvalue() const {
        if (is_factor()) {
            return 0.0;
        }
        const Vector ev = detail::eigenvalues(explicit_matrix().matrix());
        const double top = std::max(ev.maxCoeff(), 0.0);
        if (top == 0.0) {
            return ev.minCoeff() < 0.0 ? -1.0 : 0.0;
        }
        return ev.minCoeff() / top;
    }

    bool is_psd() const { return relative_min_eigenvalue() >= -tol::psd; }

private:
    PsdBlock(SymMatrix m, std::string label) : form_(std::move(m)), label_(std::move(label)) {}
    PsdBlock(Factor f, std::string label) : form_(std::move(f)), label_(std::move(label)) {}

    std::variant<SymMatrix, Factor> form_;
    std::string label_;
};

/// The three scalars the removal bounds are written in.
struct TraceFunctionals {
    double trAinv = 0.0;   // Tr(A^-1)
    double trAinvB = 0.0;  // Tr(A^-1 B)
    double trA2invB = 0.0; // Tr(A^-2 B)
};

/// Inverse of a full-rank symmetric PSD matrix via Cholesky.
inline SymMatrix invert_psd(const SymMatrix& a) {
    const Vector ev = detail::eigenvalues(a.matrix());
    const double top = ev.maxCoeff();
    if (!(top > 0.0) || !(ev.minCoeff() > tol::rank * top)) {
        throw Error(ErrorKind::SingularMatrix, "matrix is not of full rank (eigenvalue range [" + std::to_string(ev.minCoeff()) +
                                                   ", " + std::to_string(top) + "])");
    }
    Eigen::LLT<Matrix> llt(a.matrix());
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::SingularMatrix, "Cholesky factorization failed");
    }
    const Matrix id = Matrix::Identity(a.dim(), a.dim());
    Matrix inv = llt.solve(id);
    // One step of iterative refinement.
    inv += llt.solve(id - a.matrix() * inv);
    return SymMatrix(0.5 * (inv + inv.transpose()));
}

inline double trace_of_inverse(const SymMatrix& a) { return invert_psd(a).trace(); }

/// A factor F with F F^t equal to the block. Factor-form blocks are
/// returned unchanged; explicit blocks go through an eigendecomposition
/// that drops eigenvalues below psd * lambda_max. Each column's
/// largest-magnitude entry is made positive.
inline Matrix sym_sqrt(const PsdBlock& block) {
    if (block.is_factor()) {
        return block.factor();
    }
    const Matrix& m = block.explicit_matrix().matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    const Vector& ev = es.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -tol::psd * top || (top == 0.0 && ev.minCoeff() < 0.0)) {
        throw Error(ErrorKind::NotPsd, "block has eigenvalue " + std::to_string(ev.minCoeff()) + " below tolerance");
    }
    const double cutoff = tol::psd * top;
    Index kept = 0;
    for (Index i = 0; i < ev.size(); ++i) {
        kept += (top > 0.0 && ev(i) > cutoff) ? 1 : 0;
    }
    Matrix f(m.rows(), kept);
    Index col = 0;
    // Largest eigenvalues first.
    for (Index i = ev.size() - 1; i >= 0; --i) {
        if (!(top > 0.0 && ev(i) > cutoff)) {
            continue;
        }
        Vector v = es.eigenvectors().col(i);
        Index pivot = 0;
        v.cwiseAbs().maxCoeff(&pivot);
        if (v(pivot) < 0.0) {
            v = -v;
        }
        f.col(col++) = std::sqrt(ev(i)) * v;
    }
    return f;
}

/// (A - F F^t)^-1 from Ainv = A^-1 via Sherman-Morrison-Woodbury:
/// Ainv + Ainv F (Id - F^t Ainv F)^-1 F^t Ainv.
inline SymMatrix smw_downdate(const SymMatrix& ainv, const Eigen::Ref<const Matrix>& f) {
    if (f.rows() != ainv.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "factor has " + std::to_string(f.rows()) + " rows, inverse is " +
                                                      std::to_string(ainv.dim()) + "-dimensional");
    }
    if (f.cols() == 0) {
        return ainv;
    }
    const Matrix w = ainv.matrix() * f;
    Matrix cap = Matrix::Identity(f.cols(), f.cols()) - f.transpose() * w;
    cap = 0.5 * (cap + cap.transpose()).eval();
    const Vector cap_ev = detail::eigenvalues(cap);
    if (!(cap_ev.minCoeff() > tol::capacitance)) {
        throw Error(ErrorKind::CapacitanceSingular,
                    "capacitance matrix has smallest eigenvalue " + std::to_string(cap_ev.minCoeff()));
    }
    Eigen::LLT<Matrix> llt(cap);
    const Matrix update = w * llt.solve(w.transpose());
    return SymMatrix(ainv.matrix() + 0.5 * (update + update.transpose()));
}

inline SymMatrix smw_downdate(const SymMatrix& ainv, const PsdBlock& block) {
    if (block.dim() != ainv.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "block and inverse dimensions differ");
    }
    return smw_downdate(ainv, sym_sqrt(block));
}

/// Rank-one case of the downdate: Ainv + (Ainv v v^t Ainv) / (1 - v^t Ainv v).
inline SymMatrix sherman_morrison_downdate(const SymMatrix& ainv, const Eigen::Ref<const Vector>& v) {
    if (v.size() != ainv.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "vector length differs from inverse dimension");
    }
    const Vector w = ainv.matrix() * v;
    const double s = v.dot(w);
    if (!(s < 1.0 - tol::capacitance)) {
        throw Error(ErrorKind::CapacitanceSingular, "v^t Ainv v = " + std::to_string(s) + " is not below 1");
    }
    if (s == 0.0 && w.isZero(0.0)) {
        return ainv;
    }
    return SymMatrix(ainv.matrix() + (w * w.transpose()) / (1.0 - s));
}

/// Tr(F^t Ainv F) and Tr(F^t Ainv Ainv F) without forming F F^t or Ainv^2.
inline std::pair<double, double> factor_traces(const Matrix& ainv, const Eigen::Ref<const Matrix>& f) {
    if (f.cols() == 0) {
        return {0.0, 0.0};
    }
    const Matrix w = ainv * f;
    return {f.cwiseProduct(w).sum(), w.squaredNorm()};
}

inline TraceFunctionals trace_functionals(const SymMatrix& ainv, const PsdBlock& block) {
    if (block.dim() != ainv.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "block and inverse dimensions differ");
    }
    TraceFunctionals tf;
    tf.trAinv = ainv.trace();
    if (block.is_factor()) {
        std::tie(tf.trAinvB, tf.trA2invB) = factor_traces(ainv.matrix(), block.factor());
    } else {
        const Matrix& a = ainv.matrix();
        const Matrix ab = a * block.explicit_matrix().matrix();
        tf.trAinvB = ab.trace();
        tf.trA2invB = a.cwiseProduct(ab.transpose()).sum();
    }
    return tf;
}

} // namespace subsel
