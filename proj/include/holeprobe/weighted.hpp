/**
 * Weighted simplicial complexes.
 *
 * Every simplex carries a strictly positive weight. The weighted boundary is
 * the conjugate W_{n-1}^{-1} B_n W_n, so homology (and the kernel of the
 * weighted Laplacian) is unchanged, while small weights pull eigenvalues
 * toward zero.
 */
#ifndef HOLEPROBE_WEIGHTED_HPP
#define HOLEPROBE_WEIGHTED_HPP

#include <cmath>
#include <string>
#include <vector>

#include "chains.hpp"
#include "complex.hpp"
#include "errors.hpp"
#include "spectral.hpp"

namespace holeprobe {

/**
 * Per-dimension weight vectors (the diagonals of W_n), indexed by the level
 * ordering of the complex they belong to.
 */
class WeightFunction
{
    public:
        WeightFunction() = default;
        explicit WeightFunction(std::vector<Vector> levels) : levels_(std::move(levels)) {}

        /** All-ones weights for X. */
        static WeightFunction unit(const SimplicialComplex& X)
        {
            std::vector<Vector> levels;
            for (int n = 0; n <= X.dimension(); ++n)
                levels.push_back(Vector::Ones(static_cast<Eigen::Index>(X.size(n))));
            return WeightFunction(std::move(levels));
        }

        int top_dimension() const { return static_cast<int>(levels_.size()) - 1; }

        /** Weight vector for dimension n; empty outside the stored range. */
        const Vector& level(int n) const
        {
            static const Vector none;
            if (n < 0 || n > top_dimension()) return none;
            return levels_[n];
        }

        Vector& level(int n) { return levels_.at(static_cast<std::size_t>(n)); }

        double operator()(int n, std::size_t i) const
        {
            return levels_.at(static_cast<std::size_t>(n))(static_cast<Eigen::Index>(i));
        }

    private:
        std::vector<Vector> levels_;
};

/**
 * A complex together with a validated weight function.
 */
class WeightedComplex
{
    public:
        WeightedComplex() = default;

        WeightedComplex(SimplicialComplex complex, WeightFunction weights)
            : complex_(std::move(complex)), weights_(std::move(weights))
        {
            if (weights_.top_dimension() != complex_.dimension())
                throw Error(ErrorKind::InvalidWeight,
                            "weights given for " + std::to_string(weights_.top_dimension() + 1) +
                                " levels, complex has " + std::to_string(complex_.dimension() + 1));
            for (int n = 0; n <= complex_.dimension(); ++n)
            {
                const Vector& w = weights_.level(n);
                if (static_cast<std::size_t>(w.size()) != complex_.size(n))
                    throw Error(ErrorKind::InvalidWeight,
                                "level " + std::to_string(n) + " has " + std::to_string(w.size()) +
                                    " weights for " + std::to_string(complex_.size(n)) + " simplices");
                for (Eigen::Index i = 0; i < w.size(); ++i)
                    if (!(w(i) > 0.0) || !std::isfinite(w(i)))
                        throw Error(ErrorKind::InvalidWeight,
                                    "weight of " + complex_.simplex(n, static_cast<std::size_t>(i)).str() +
                                        " must be positive and finite");
            }
        }

        static WeightedComplex unit(SimplicialComplex complex)
        {
            auto w = WeightFunction::unit(complex);
            return WeightedComplex(std::move(complex), std::move(w));
        }

        const SimplicialComplex& complex() const { return complex_; }
        const WeightFunction& weights() const { return weights_; }

        double weight(const Simplex& s) const
        {
            return weights_(s.dim(), complex_.require_index(s));
        }

    private:
        SimplicialComplex complex_;
        WeightFunction weights_;
};

/** True iff w_n(c) <= w_{n-1}(b) for every face b of every simplex c. */
inline bool check_filtration(const WeightedComplex& X)
{
    const auto& K = X.complex();
    for (int n = 1; n <= K.dimension(); ++n)
    {
        const auto& cells = K.level(n);
        for (std::size_t k = 0; k < cells.size(); ++k)
        {
            const double wc = X.weights()(n, k);
            for (std::size_t i = 0; i < cells[k].size(); ++i)
                if (wc > X.weights()(n - 1, K.require_index(cells[k].face(i))))
                    return false;
        }
    }
    return true;
}

/** Entry (i,k) = sigma(b_i, c_k) w_n(c_k) / w_{n-1}(b_i). */
inline SparseMatrix weighted_boundary(const WeightedComplex& X, int n)
{
    SparseMatrix B = boundary_matrix(X.complex(), n);
    if (B.nonZeros() == 0) return B;
    const Vector& wn = X.weights().level(n);
    const Vector& wl = X.weights().level(n - 1);
    for (Eigen::Index k = 0; k < B.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(B, k); it; ++it)
            it.valueRef() *= wn(it.col()) / wl(it.row());
    return B;
}

/** B~_n^T B~_n. */
inline SparseMatrix weighted_down_laplacian(const WeightedComplex& X, int n)
{
    SparseMatrix B = weighted_boundary(X, n);
    SparseMatrix L = SparseMatrix(B.transpose()) * B;
    return L;
}

/** B~_{n+1} B~_{n+1}^T. */
inline SparseMatrix weighted_up_laplacian(const WeightedComplex& X, int n)
{
    SparseMatrix B = weighted_boundary(X, n + 1);
    if (B.rows() == 0)
    {
        const auto size = static_cast<Eigen::Index>(X.complex().size(n));
        return SparseMatrix(size, size);
    }
    SparseMatrix L = B * SparseMatrix(B.transpose());
    return L;
}

inline SparseMatrix weighted_laplacian(const WeightedComplex& X, int n)
{
    SparseMatrix L = weighted_down_laplacian(X, n) + weighted_up_laplacian(X, n);
    return L;
}

namespace detail {

inline SparseMatrix diagonal(const Vector& d)
{
    SparseMatrix D(d.size(), d.size());
    std::vector<Eigen::Triplet<double>> t;
    for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d(i));
    D.setFromTriplets(t.begin(), t.end());
    return D;
}

}   // namespace detail

/**
 * Second assembly route for the weighted Laplacians, written directly in
 * terms of the unweighted boundaries and the weight matrices:
 *   down: W_n B_n^T W_{n-1}^{-2} B_n W_n
 *   up:   W_n^{-1} B_{n+1} W_{n+1}^2 B_{n+1}^T W_n^{-1}
 */
inline SparseMatrix sandwich_down_laplacian(const WeightedComplex& X, int n)
{
    const auto& K = X.complex();
    const auto size = static_cast<Eigen::Index>(K.size(n));
    if (n == 0) return SparseMatrix(size, size);
    SparseMatrix B = boundary_matrix(K, n);
    SparseMatrix Wn = detail::diagonal(X.weights().level(n));
    SparseMatrix Wl_inv2 = detail::diagonal(X.weights().level(n - 1).array().square().inverse().matrix());
    SparseMatrix L = Wn * SparseMatrix(B.transpose()) * Wl_inv2 * B * Wn;
    return L;
}

inline SparseMatrix sandwich_up_laplacian(const WeightedComplex& X, int n)
{
    const auto& K = X.complex();
    const auto size = static_cast<Eigen::Index>(K.size(n));
    if (K.size(n + 1) == 0) return SparseMatrix(size, size);
    SparseMatrix B = boundary_matrix(K, n + 1);
    SparseMatrix Wn_inv = detail::diagonal(X.weights().level(n).array().inverse().matrix());
    SparseMatrix Wu2 = detail::diagonal(X.weights().level(n + 1).array().square().matrix());
    SparseMatrix L = Wn_inv * B * Wu2 * SparseMatrix(B.transpose()) * Wn_inv;
    return L;
}

inline SparseMatrix sandwich_laplacian(const WeightedComplex& X, int n)
{
    SparseMatrix L = sandwich_down_laplacian(X, n) + sandwich_up_laplacian(X, n);
    return L;
}

/**
 * Entry (i,j) of the weighted up-Laplacian from the coface sum
 *   sum_{f > c_i, f > c_j} sigma(c_i,f) sigma(c_j,f) w(f)^2 / (w(c_i) w(c_j)).
 */
inline double up_laplacian_entry(const WeightedComplex& X, int n, std::size_t i, std::size_t j)
{
    const auto& K = X.complex();
    if (i >= K.size(n) || j >= K.size(n))
        throw Error(ErrorKind::IndexOutOfRange,
                    "(" + std::to_string(i) + "," + std::to_string(j) + ") outside level " + std::to_string(n));
    const Simplex& ci = K.simplex(n, i);
    const Simplex& cj = K.simplex(n, j);
    const double wi = X.weights()(n, i);
    const double wj = X.weights()(n, j);
    double sum = 0.0;
    for (const auto& f : K.cofaces(ci))
    {
        const int sj = orientation_sign(cj, f);
        if (sj == 0) continue;
        const double wf = X.weight(f);
        sum += orientation_sign(ci, f) * sj * wf * wf / (wi * wj);
    }
    return sum;
}

/** [B~_n^T | B~_{n+1}], so that L~_n = A A^T. */
inline DenseMatrix laplacian_factor(const WeightedComplex& X, int n)
{
    DenseMatrix down = DenseMatrix(weighted_boundary(X, n)).transpose();
    DenseMatrix up = DenseMatrix(weighted_boundary(X, n + 1));
    DenseMatrix A(static_cast<Eigen::Index>(X.complex().size(n)), down.cols() + up.cols());
    A << down, up;
    return A;
}

/** Spectrum of L~_n computed from its factor; see factor_spectrum. */
inline Spectrum laplacian_spectrum(const WeightedComplex& X, int n, double zero_tol = kDefaultZeroTol,
                                   bool vectors = true)
{
    return factor_spectrum(laplacian_factor(X, n), zero_tol, vectors);
}

inline std::size_t laplacian_nullity(const WeightedComplex& X, int n, double zero_tol = kDefaultZeroTol)
{
    return factor_nullity(laplacian_factor(X, n), zero_tol);
}

struct NormReport
{
    double norm = 0.0;
    double bound = 0.0;        // (n+2)|X_n|
    bool filtration = false;
    bool holds = false;        // norm <= bound; only meaningful under filtration
};

inline double operator_norm(const WeightedComplex& X, int n)
{
    return spectral_norm(weighted_laplacian(X, n));
}

inline NormReport norm_report(const WeightedComplex& X, int n)
{
    NormReport r;
    r.norm = operator_norm(X, n);
    r.bound = static_cast<double>(n + 2) * static_cast<double>(X.complex().size(n));
    r.filtration = check_filtration(X);
    r.holds = r.norm <= r.bound * (1.0 + 1e-12);
    return r;
}

namespace detail {

inline WeightFunction gather_weights(const SimplicialComplex& target,
                                     const WeightedComplex& primary, const WeightedComplex* secondary)
{
    std::vector<Vector> levels;
    for (int n = 0; n <= target.dimension(); ++n)
    {
        Vector w(static_cast<Eigen::Index>(target.size(n)));
        const auto& cells = target.level(n);
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (auto idx = primary.complex().index_of(cells[i]))
                w(static_cast<Eigen::Index>(i)) = primary.weights()(n, *idx);
            else
                w(static_cast<Eigen::Index>(i)) = secondary->weight(cells[i]);
        }
        levels.push_back(std::move(w));
    }
    return WeightFunction(std::move(levels));
}

inline void require_compatible(const WeightedComplex& X, const WeightedComplex& Y)
{
    for (const auto& s : X.complex().all_simplices())
    {
        auto j = Y.complex().index_of(s);
        if (j && X.weight(s) != Y.weights()(s.dim(), *j))
            throw Error(ErrorKind::IncompatibleWeights,
                        s.str() + " has weight " + std::to_string(X.weight(s)) + " vs " +
                            std::to_string(Y.weights()(s.dim(), *j)));
    }
}

}   // namespace detail

/** Union; weights come from whichever operand contains the simplex. */
inline WeightedComplex weighted_union(const WeightedComplex& X, const WeightedComplex& Y)
{
    detail::require_compatible(X, Y);
    SimplicialComplex U = complex_union(X.complex(), Y.complex());
    auto w = detail::gather_weights(U, X, &Y);
    return WeightedComplex(std::move(U), std::move(w));
}

/** Intersection; weights restricted from X. */
inline WeightedComplex weighted_intersection(const WeightedComplex& X, const WeightedComplex& Y)
{
    detail::require_compatible(X, Y);
    SimplicialComplex I = intersection(X.complex(), Y.complex());
    auto w = detail::gather_weights(I, X, nullptr);
    return WeightedComplex(std::move(I), std::move(w));
}

}   // namespace holeprobe

#endif
