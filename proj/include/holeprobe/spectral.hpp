/**
 * Dense symmetric eigendecomposition and the small helpers built on it:
 * tolerance-based nullity and extraction of the smallest nonzero eigenpairs.
 */
#ifndef HOLEPROBE_SPECTRAL_HPP
#define HOLEPROBE_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "chains.hpp"
#include "errors.hpp"

namespace holeprobe {

inline constexpr double kDefaultZeroTol = 1e-8;

struct Spectrum
{
    Vector eigenvalues;         // ascending
    DenseMatrix eigenvectors;   // columns aligned with eigenvalues; empty if not requested
    double zero_tol = kDefaultZeroTol;
    double zero_cut = -1.0;     // explicit threshold; negative means the relative default

    double max_eigenvalue() const
    {
        return eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
    }

    /** Absolute threshold at or below which an eigenvalue counts as zero. */
    double zero_threshold() const
    {
        return zero_cut >= 0.0 ? zero_cut : zero_tol * std::max(1.0, max_eigenvalue());
    }

    std::size_t nullity() const
    {
        const double thr = zero_threshold();
        std::size_t count = 0;
        for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
            if (eigenvalues(i) <= thr) ++count;
        return count;
    }
};

struct Eigenpair
{
    double value = 0.0;
    Vector vector;
};

/** Flip v so that its first entry with |v_i| > 1e-12 is positive. */
inline void canonicalize_sign(Vector& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (std::abs(v(i)) > 1e-12)
        {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

inline Spectrum eig_sym(const DenseMatrix& M, double zero_tol = kDefaultZeroTol, bool vectors = true)
{
    if (M.rows() != M.cols())
        throw Error(ErrorKind::Numeric, "eig_sym needs a square matrix");
    if (!M.allFinite())
        throw Error(ErrorKind::Numeric, "matrix has non-finite entries");

    Spectrum out;
    out.zero_tol = zero_tol;
    if (M.rows() == 0)
    {
        out.eigenvalues.resize(0);
        out.eigenvectors.resize(0, 0);
        return out;
    }
    DenseMatrix S = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(
        S, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::Numeric, "symmetric eigensolver did not converge");
    out.eigenvalues = solver.eigenvalues();
    if (vectors)
    {
        out.eigenvectors = solver.eigenvectors();
        for (Eigen::Index j = 0; j < out.eigenvectors.cols(); ++j)
        {
            Vector col = out.eigenvectors.col(j);
            canonicalize_sign(col);
            out.eigenvectors.col(j) = col;
        }
    }
    return out;
}

inline Spectrum eig_sym(const SparseMatrix& M, double zero_tol = kDefaultZeroTol, bool vectors = true)
{
    return eig_sym(DenseMatrix(M), zero_tol, vectors);
}

inline std::size_t nullity(const SparseMatrix& M, double zero_tol = kDefaultZeroTol)
{
    return eig_sym(M, zero_tol, false).nullity();
}

inline std::size_t nullity(const DenseMatrix& M, double zero_tol = kDefaultZeroTol)
{
    return eig_sym(M, zero_tol, false).nullity();
}

/**
 * Spectrum of A A^T from an SVD of the factor A: eigenvalues sigma^2, with
 * zero meaning sigma <= zero_tol * max(1, sigma_max). Small eigenvalues keep
 * absolute accuracy near eps * sigma_max^2 * (sigma_min / sigma_max) rather
 * than eps * sigma_max^2, which matters once weights span many decades.
 */
inline Spectrum factor_spectrum(const DenseMatrix& A, double zero_tol = kDefaultZeroTol, bool vectors = true)
{
    if (!A.allFinite())
        throw Error(ErrorKind::Numeric, "matrix has non-finite entries");
    Spectrum out;
    out.zero_tol = zero_tol;
    const Eigen::Index rows = A.rows();
    out.eigenvalues = Vector::Zero(rows);
    if (vectors) out.eigenvectors = DenseMatrix::Identity(rows, rows);
    if (rows == 0 || A.cols() == 0)
    {
        out.zero_cut = 0.0;
        return out;
    }
    Eigen::BDCSVD<DenseMatrix> svd(A, vectors ? Eigen::ComputeFullU : 0);
    const Vector& sv = svd.singularValues();   // descending
    const double smax = sv.size() ? sv(0) : 0.0;
    const double cut = zero_tol * std::max(1.0, smax);
    out.zero_cut = cut * cut;
    // Ascending order: the rows - |sv| structural zeros first, then sv reversed.
    const Eigen::Index r = sv.size();
    for (Eigen::Index i = 0; i < rows; ++i)
    {
        const Eigen::Index src = rows - 1 - i;   // column of U in descending order
        out.eigenvalues(i) = src < r ? sv(src) * sv(src) : 0.0;
        if (vectors)
        {
            Vector col = svd.matrixU().col(src);
            canonicalize_sign(col);
            out.eigenvectors.col(i) = col;
        }
    }
    return out;
}

/** dim ker A A^T under the same singular-value cut as factor_spectrum. */
inline std::size_t factor_nullity(const DenseMatrix& A, double zero_tol = kDefaultZeroTol)
{
    return factor_spectrum(A, zero_tol, false).nullity();
}

/**
 * The k smallest eigenpairs of a spectrum after skipping `zero_count`
 * eigenvalues. Used directly when the kernel dimension is known
 * combinatorially.
 */
inline std::vector<Eigenpair> eigenpairs_after(const Spectrum& spectrum, std::size_t zero_count,
                                               std::size_t k)
{
    if (k == 0)
        throw Error(ErrorKind::Parameter, "k must be at least 1");
    const auto total = static_cast<std::size_t>(spectrum.eigenvalues.size());
    if (zero_count + k > total)
        throw Error(ErrorKind::InsufficientSpectrum,
                    "requested " + std::to_string(k) + " nonzero eigenvalues but only " +
                        std::to_string(total > zero_count ? total - zero_count : 0) + " exist");
    if (spectrum.eigenvectors.cols() != spectrum.eigenvalues.size())
        throw Error(ErrorKind::Parameter, "spectrum was computed without eigenvectors");

    std::vector<Eigenpair> out;
    out.reserve(k);
    for (std::size_t i = zero_count; i < zero_count + k; ++i)
    {
        const auto idx = static_cast<Eigen::Index>(i);
        out.push_back({spectrum.eigenvalues(idx), spectrum.eigenvectors.col(idx)});
    }
    return out;
}

/**
 * The k smallest eigenvalues strictly above zero_tol * max(1, lambda_max),
 * with unit eigenvectors whose first nonzero component is positive.
 */
inline std::vector<Eigenpair> smallest_nonzero_eigenpairs(const DenseMatrix& M, std::size_t k,
                                                          double zero_tol = kDefaultZeroTol)
{
    if (k == 0)
        throw Error(ErrorKind::Parameter, "k must be at least 1");
    Spectrum s = eig_sym(M, zero_tol, true);
    return eigenpairs_after(s, s.nullity(), k);
}

inline std::vector<Eigenpair> smallest_nonzero_eigenpairs(const SparseMatrix& M, std::size_t k,
                                                          double zero_tol = kDefaultZeroTol)
{
    return smallest_nonzero_eigenpairs(DenseMatrix(M), k, zero_tol);
}

/** Largest eigenvalue of a symmetric PSD matrix, i.e. its 2-norm. */
inline double spectral_norm(const SparseMatrix& M)
{
    if (M.rows() == 0) return 0.0;
    return std::max(0.0, eig_sym(M, kDefaultZeroTol, false).max_eigenvalue());
}

}   // namespace holeprobe

#endif
