/**
 * Eigenvalue gradients with respect to sensor positions, and the two
 * position dynamics built on them: coverage repair (ascent on the smallest
 * nonzero eigenvalue of the weighted 1-Laplacian) and caging (descent on the
 * k-th smallest nonzero eigenvalue).
 *
 * All objectives are evaluated on Delaunay complexes with geometric weights.
 * Such complexes are contractible, so the number of zero eigenvalues is
 * known combinatorially: |X_1| - |X_2| for the up-Laplacian and none for the
 * full Laplacian. Eigenvalues are obtained as squared singular values of a
 * factor A with L = A A^T, which keeps small eigenvalues accurate even when
 * short edges make the largest eigenvalue huge.
 */
#ifndef HOLEPROBE_DYNAMICS_HPP
#define HOLEPROBE_DYNAMICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "geometry.hpp"
#include "spectral.hpp"
#include "weighted.hpp"

namespace holeprobe {

enum class LaplacianKind
{
    Up,     // B~_2 B~_2^T on edges
    Full    // B~_1^T B~_1 + B~_2 B~_2^T
};

/**
 * Exponent of the edge-length norm that fixes the scale during the dynamics.
 * The objective is homogeneous in scale, so it is evaluated on rescaled
 * coordinates; a smooth norm avoids the kinks of the plain maximum when
 * several edges tie for longest.
 */
inline constexpr double kScaleNormExponent = 32.0;

struct ObjectiveSpec
{
    std::size_t k = 1;                          // track the k-th smallest nonzero eigenvalue
    LaplacianKind laplacian = LaplacianKind::Up;
    bool scale_invariant = false;               // rescale so the edge-length norm is 0.9 before evaluating
    double degeneracy_tol = 1e-6;               // relative eigengap below which lambda_k is degenerate
};

struct ObjectiveEvaluation
{
    double value = 0.0;                  // lambda_k
    std::vector<double> smallest;        // lambda_1 .. lambda_k (nonzero part of the spectrum)
    std::vector<Eigenpair> cluster;      // orthonormal basis of lambda_k's eigenspace cluster
    bool degenerate = false;
    PointSet gradient;                   // empty unless requested
};

namespace detail {

/** Factor A with L = A A^T, in edge-by-column layout. */
inline DenseMatrix laplacian_factor(const WeightedComplex& X, LaplacianKind kind)
{
    DenseMatrix up = DenseMatrix(weighted_boundary(X, 2));
    if (kind == LaplacianKind::Up)
        return up;
    DenseMatrix down = DenseMatrix(weighted_boundary(X, 1)).transpose();
    DenseMatrix A(up.rows(), down.cols() + up.cols());
    A << down, up;
    return A;
}

/** Number of nonzero eigenvalues of A A^T on a contractible 2-complex. */
inline std::size_t nonzero_count(const SimplicialComplex& X, LaplacianKind kind)
{
    return kind == LaplacianKind::Up ? X.size(2) : X.size(1);
}

/**
 * d lambda / d w_1(e) for the Rayleigh quotient v^T L v, with w_2 the product
 * of edge weights and w_0 the largest incident edge weight.
 */
inline Vector edge_weight_sensitivity(const WeightedComplex& X, const Vector& v, LaplacianKind kind)
{
    const auto& K = X.complex();
    const auto& edges = K.level(1);
    const Vector& w1 = X.weights().level(1);
    Vector g = Vector::Zero(static_cast<Eigen::Index>(edges.size()));

    // Up part: u_f = sum_{e<f} sigma(e,f) v_e prod_{e' != e} w_{e'}.
    for (const auto& f : K.level(2))
    {
        std::array<Eigen::Index, 3> e{};
        std::array<double, 3> sv{};
        for (std::size_t i = 0; i < 3; ++i)
        {
            e[i] = static_cast<Eigen::Index>(K.require_index(f.face(i)));
            sv[i] = ((i % 2 == 0) ? 1.0 : -1.0) * v(e[i]);
        }
        const double u = sv[0] * w1(e[1]) * w1(e[2]) + sv[1] * w1(e[0]) * w1(e[2]) + sv[2] * w1(e[0]) * w1(e[1]);
        for (std::size_t i = 0; i < 3; ++i)
        {
            const std::size_t j = (i + 1) % 3, l = (i + 2) % 3;
            g(e[i]) += 2.0 * u * (sv[j] * w1(e[l]) + sv[l] * w1(e[j]));
        }
    }

    if (kind == LaplacianKind::Full)
    {
        const Vector& w0 = X.weights().level(0);
        // r_x = sum_{e ni x} sigma(x,e) w_e v_e / w0_x
        Vector r = Vector::Zero(w0.size());
        std::vector<Eigen::Index> argmax(static_cast<std::size_t>(w0.size()), -1);
        for (std::size_t i = 0; i < edges.size(); ++i)
        {
            const auto ei = static_cast<Eigen::Index>(i);
            const auto a = static_cast<Eigen::Index>(K.require_index(Simplex{edges[i][0]}));
            const auto b = static_cast<Eigen::Index>(K.require_index(Simplex{edges[i][1]}));
            r(a) -= w1(ei) * v(ei) / w0(a);
            r(b) += w1(ei) * v(ei) / w0(b);
            for (auto x : {a, b})
                if (argmax[static_cast<std::size_t>(x)] < 0 || w1(ei) > w1(argmax[static_cast<std::size_t>(x)]))
                    argmax[static_cast<std::size_t>(x)] = ei;
        }
        for (std::size_t i = 0; i < edges.size(); ++i)
        {
            const auto ei = static_cast<Eigen::Index>(i);
            const auto a = static_cast<Eigen::Index>(K.require_index(Simplex{edges[i][0]}));
            const auto b = static_cast<Eigen::Index>(K.require_index(Simplex{edges[i][1]}));
            g(ei) += 2.0 * r(a) * (-v(ei)) / w0(a) + 2.0 * r(b) * v(ei) / w0(b);
        }
        for (Eigen::Index x = 0; x < w0.size(); ++x)
            if (argmax[static_cast<std::size_t>(x)] >= 0)
                g(argmax[static_cast<std::size_t>(x)]) -= 2.0 * r(x) * r(x) / w0(x);
    }
    return g;
}

/** Chain rule from edge weights 1/|e| to vertex positions. */
inline PointSet edge_to_position_gradient(std::span<const Point> points, const SimplicialComplex& X,
                                          const Vector& edge_grad)
{
    PointSet grad(points.size(), Point::Zero());
    const auto& edges = X.level(1);
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const VertexId a = edges[i][0], b = edges[i][1];
        const Point d = points[a] - points[b];
        const double len = d.norm();
        // d(1/len)/dp_a = -d / len^3
        const Point dw = -d / (len * len * len);
        grad[a] += edge_grad(static_cast<Eigen::Index>(i)) * dw;
        grad[b] -= edge_grad(static_cast<Eigen::Index>(i)) * dw;
    }
    return grad;
}

/** (sum_e |e|^p)^(1/p): a smooth stand-in for the longest edge, never below it. */
inline double edge_length_norm(std::span<const Point> points, const SimplicialComplex& X, double p)
{
    double longest = longest_edge(points, X);
    double sum = 0.0;
    for (const auto& e : X.level(1))
        sum += std::pow(edge_length(points, e) / longest, p);
    return longest * std::pow(sum, 1.0 / p);
}

}   // namespace detail

/**
 * Gradient of an eigenvalue of the weighted 1-Laplacian with respect to the
 * positions, for a fixed triangulation X, via d lambda = v^T dL v.
 * `pair.vector` must be a unit eigenvector of the chosen Laplacian built from
 * geometric weights on `points`.
 */
inline PointSet eigenpair_position_gradient(std::span<const Point> points, const SimplicialComplex& X,
                                            const Eigenpair& pair, LaplacianKind kind = LaplacianKind::Up)
{
    WeightedComplex W(X, geometric_weights(points, X));
    Vector g = detail::edge_weight_sensitivity(W, pair.vector, kind);
    return detail::edge_to_position_gradient(points, X, g);
}

/**
 * Evaluate lambda_k on a fixed triangulation. With `with_gradient`, the
 * position gradient is attached; at a degenerate eigenvalue it is the
 * average over the eigenspace basis and `degenerate` is set.
 */
inline ObjectiveEvaluation evaluate_objective(std::span<const Point> points, const SimplicialComplex& X,
                                              const ObjectiveSpec& spec, bool with_gradient = true)
{
    if (spec.k == 0)
        throw Error(ErrorKind::Parameter, "k must be at least 1");

    PointSet local;
    std::span<const Point> at = points;
    double scale = 1.0, size = 0.0;
    if (spec.scale_invariant)
    {
        size = detail::edge_length_norm(points, X, kScaleNormExponent);
        scale = kNormalizedLongestEdge / size;
        local = scale_about_centroid(points, scale);
        at = local;
    }

    WeightedComplex W(X, geometric_weights(at, X));
    DenseMatrix A = detail::laplacian_factor(W, spec.laplacian);
    const std::size_t nonzero = std::min<std::size_t>(detail::nonzero_count(X, spec.laplacian),
                                                      static_cast<std::size_t>(std::min(A.rows(), A.cols())));
    if (spec.k > nonzero)
        throw Error(ErrorKind::InsufficientSpectrum,
                    "requested eigenvalue " + std::to_string(spec.k) + " of " + std::to_string(nonzero) +
                        " nonzero eigenvalues");
    if (!A.allFinite())
        throw Error(ErrorKind::Numeric, "non-finite Laplacian factor");

    Eigen::BDCSVD<DenseMatrix> svd(A, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
        throw Error(ErrorKind::Numeric, "singular value decomposition failed");
    const Vector& sigma = svd.singularValues();   // descending
    auto lambda = [&](std::size_t j) {            // j-th smallest nonzero, 1-based
        const double s = sigma(static_cast<Eigen::Index>(nonzero - j));
        return s * s;
    };

    ObjectiveEvaluation out;
    for (std::size_t j = 1; j <= spec.k; ++j) out.smallest.push_back(lambda(j));
    out.value = lambda(spec.k);

    // Cluster of eigenvalues within the relative tolerance of lambda_k.
    std::size_t lo = spec.k, hi = spec.k;
    const double tol = spec.degeneracy_tol * out.value;
    while (lo > 1 && lambda(lo) - lambda(lo - 1) <= tol) --lo;
    while (hi < nonzero && lambda(hi + 1) - lambda(hi) <= tol) ++hi;
    out.degenerate = hi > lo;
    for (std::size_t j = lo; j <= hi; ++j)
    {
        Vector v = svd.matrixU().col(static_cast<Eigen::Index>(nonzero - j));
        canonicalize_sign(v);
        out.cluster.push_back({lambda(j), std::move(v)});
    }

    if (!with_gradient)
        return out;

    Vector edge_grad = Vector::Zero(static_cast<Eigen::Index>(X.size(1)));
    for (const auto& pair : out.cluster)
        edge_grad += detail::edge_weight_sensitivity(W, pair.vector, spec.laplacian);
    edge_grad /= static_cast<double>(out.cluster.size());
    PointSet grad = detail::edge_to_position_gradient(at, X, edge_grad);

    if (spec.scale_invariant)
    {
        // F(S) = lambda(c + s(S - c)) with s = 0.9 / N(S), N the edge-length
        // p-norm; dN/dl_e = (l_e / N)^(p-1).
        const Point c = centroid(points);
        double radial = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            radial += grad[i].dot(points[i] - c);
        for (auto& g : grad) g *= scale;
        const double factor = scale * radial / size;
        for (const auto& e : X.level(1))
        {
            const Point d = points[e[0]] - points[e[1]];
            const double len = d.norm();
            const double dn = std::pow(len / size, kScaleNormExponent - 1.0);
            grad[e[0]] -= factor * dn * d / len;
            grad[e[1]] += factor * dn * d / len;
        }
    }
    out.gradient = std::move(grad);
    return out;
}

/**
 * Position gradient of the tracked eigenvalue; throws a multiplicity error
 * when the eigenvalue is not simple.
 */
inline PointSet eigenvalue_position_gradient(std::span<const Point> points, const SimplicialComplex& X,
                                             const ObjectiveSpec& spec = {})
{
    auto eval = evaluate_objective(points, X, spec, true);
    if (eval.degenerate)
        throw Error(ErrorKind::Multiplicity,
                    "eigenvalue " + std::to_string(eval.value) + " has multiplicity " +
                        std::to_string(eval.cluster.size()) + " within the gap tolerance");
    return eval.gradient;
}

using PositionObjective = std::function<double(std::span<const Point>)>;

/**
 * Central differences, coordinate by coordinate. When `fixed` is given, each
 * perturbed configuration is re-triangulated and a flip error is raised if
 * the Delaunay combinatorics differ from `fixed`.
 */
inline PointSet finite_difference_gradient(std::span<const Point> points, const PositionObjective& objective,
                                           double h, const SimplicialComplex* fixed = nullptr)
{
    if (!(h > 0.0))
        throw Error(ErrorKind::Parameter, "finite difference step must be positive");
    PointSet work(points.begin(), points.end());
    PointSet grad(points.size(), Point::Zero());
    for (std::size_t i = 0; i < work.size(); ++i)
    {
        for (int d = 0; d < 2; ++d)
        {
            const double orig = work[i](d);
            double values[2];
            for (int side = 0; side < 2; ++side)
            {
                work[i](d) = orig + (side == 0 ? h : -h);
                if (fixed && !(delaunay(work) == *fixed))
                    throw Error(ErrorKind::FlipDetected,
                                "moving point " + std::to_string(i) + " by " + std::to_string(h) +
                                    " changes the triangulation");
                values[side] = objective(work);
            }
            work[i](d) = orig;
            grad[i](d) = (values[0] - values[1]) / (2.0 * h);
        }
    }
    return grad;
}

struct GradientReport
{
    PointSet analytic;
    PointSet finite_difference;
    double max_rel_error = 0.0;   // max |analytic - fd| / max |fd|, over all components
};

inline double max_relative_error(const PointSet& analytic, const PointSet& reference)
{
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i)
    {
        diff = std::max(diff, (analytic[i] - reference[i]).cwiseAbs().maxCoeff());
        scale = std::max(scale, reference[i].cwiseAbs().maxCoeff());
    }
    return scale > 0.0 ? diff / scale : diff;
}

/**
 * Compare the analytic gradient of lambda_k against central differences on
 * the Delaunay triangulation of `points` (held fixed).
 */
inline GradientReport gradient_report(std::span<const Point> points, const ObjectiveSpec& spec, double h = 1e-6)
{
    SimplicialComplex X = delaunay(points);
    GradientReport r;
    r.analytic = eigenvalue_position_gradient(points, X, spec);
    PositionObjective f = [&](std::span<const Point> p) { return evaluate_objective(p, X, spec, false).value; };
    r.finite_difference = finite_difference_gradient(points, f, h, &X);
    r.max_rel_error = max_relative_error(r.analytic, r.finite_difference);
    return r;
}

struct TrajectoryStep
{
    std::size_t step = 0;
    double lambda = 0.0;
    std::vector<double> smallest;   // lambda_1 .. lambda_k
    PointSet positions;
    bool accepted = true;
    double step_size = 0.0;
    bool combinatorics_changed = false;
    bool degenerate = false;
};

struct Trajectory
{
    std::vector<TrajectoryStep> steps;

    const TrajectoryStep& initial() const { return steps.front(); }
    const TrajectoryStep& final() const { return steps.back(); }
};

struct RunOptions
{
    std::size_t steps = 100;
    double step_size = 1e-2;    // largest single-point displacement per step
    bool line_search = true;
    int max_halvings = 20;
    LaplacianKind laplacian = LaplacianKind::Up;
};

/**
 * Rescale about the centroid so the edge-length p-norm of the Delaunay
 * triangulation is 0.9; the longest edge is then at most 0.9.
 */
inline PointSet canonical_scale(std::span<const Point> points)
{
    const double size = detail::edge_length_norm(points, delaunay(points), kScaleNormExponent);
    return scale_about_centroid(points, kNormalizedLongestEdge / size);
}

namespace detail {

/**
 * Shared loop. `direction` is +1 for ascent, -1 for descent. Each step moves
 * the points along the normalized gradient, re-normalizes the scale,
 * re-triangulates and (optionally) halves the step until the objective does
 * not get worse. Steps are taken in normalized coordinates; recorded
 * positions are mapped back to the caller's frame by the inverse of the
 * initial normalization.
 */
inline Trajectory run_dynamics(std::span<const Point> start, const ObjectiveSpec& spec, double direction,
                               const RunOptions& opts)
{
    if (!(opts.step_size > 0.0))
        throw Error(ErrorKind::Parameter, "step size must be positive");

    PointSet S = canonical_scale(start);
    SimplicialComplex X = delaunay(S);
    ObjectiveEvaluation current = evaluate_objective(S, X, spec, true);

    const Point origin = centroid(start);
    const double unscale = detail::edge_length_norm(start, X, kScaleNormExponent) / kNormalizedLongestEdge;
    auto to_caller = [&](const PointSet& P) {
        PointSet out(P.size());
        for (std::size_t i = 0; i < P.size(); ++i) out[i] = origin + unscale * (P[i] - origin);
        return out;
    };

    Trajectory traj;
    traj.steps.push_back({0, current.value, current.smallest, PointSet(start.begin(), start.end()), true, 0.0,
                          false, current.degenerate});

    bool stalled = false;
    for (std::size_t it = 1; it <= opts.steps; ++it)
    {
        if (stalled)
        {
            TrajectoryStep copy = traj.steps.back();
            copy.step = it;
            traj.steps.push_back(std::move(copy));
            continue;
        }

        double largest = 0.0;
        for (const auto& g : current.gradient) largest = std::max(largest, g.norm());

        bool accepted = false;
        double t = opts.step_size;
        PointSet trial;
        SimplicialComplex trial_complex;
        ObjectiveEvaluation trial_eval;
        if (largest > 0.0 && std::isfinite(largest))
        {
            for (int halving = 0; halving <= opts.max_halvings; ++halving)
            {
                bool ok = true;
                try
                {
                    trial.resize(S.size());
                    for (std::size_t i = 0; i < S.size(); ++i)
                        trial[i] = S[i] + (direction * t / largest) * current.gradient[i];
                    // The objective jumps across Delaunay flips, so the
                    // decrease test is made on the current triangulation,
                    // where the gradient is valid.
                    if (opts.line_search)
                    {
                        const double fixed = evaluate_objective(trial, X, spec, false).value;
                        ok = direction * (fixed - current.value) >= 0.0;
                    }
                    if (ok)
                    {
                        trial = canonical_scale(trial);
                        trial_complex = delaunay(trial);
                        trial_eval = evaluate_objective(trial, trial_complex, spec, true);
                    }
                }
                catch (const Error&)
                {
                    ok = false;
                }
                if (ok)
                {
                    accepted = true;
                    break;
                }
                if (!opts.line_search) break;
                t *= 0.5;
            }
        }

        if (accepted)
        {
            const bool changed = !(trial_complex == X);
            S = std::move(trial);
            X = std::move(trial_complex);
            current = std::move(trial_eval);
            traj.steps.push_back({it, current.value, current.smallest, to_caller(S), true, t, changed,
                                  current.degenerate});
        }
        else
        {
            traj.steps.push_back({it, current.value, current.smallest, traj.steps.back().positions, false, t, false,
                                  current.degenerate});
            stalled = true;   // the next attempt would be identical
        }
    }
    return traj;
}

}   // namespace detail

/** Gradient ascent on the smallest nonzero eigenvalue of L~_1 (up part by default). */
inline Trajectory repair_run(std::span<const Point> points, const RunOptions& opts = {})
{
    ObjectiveSpec spec;
    spec.k = 1;
    spec.laplacian = opts.laplacian;
    spec.scale_invariant = true;
    return detail::run_dynamics(points, spec, +1.0, opts);
}

/** Gradient descent on the k-th smallest nonzero eigenvalue. */
inline Trajectory caging_run(std::span<const Point> points, std::size_t k, const RunOptions& opts = {})
{
    if (k == 0)
        throw Error(ErrorKind::Parameter, "caging needs k >= 1");
    ObjectiveSpec spec;
    spec.k = k;
    spec.laplacian = opts.laplacian;
    spec.scale_invariant = true;
    return detail::run_dynamics(points, spec, -1.0, opts);
}

}   // namespace holeprobe

#endif
