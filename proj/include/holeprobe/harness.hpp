/**
 * Executable checks of the small-eigenvalue bound for weighted unions, and
 * the canonical demo configurations.
 *
 * An instance is an outer complex with holes (unit weights) and filler discs
 * whose interiors carry small weights. Every instance is validated against
 * the hypotheses of the bound before the bound itself is evaluated.
 */
#ifndef HOLEPROBE_HARNESS_HPP
#define HOLEPROBE_HARNESS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chains.hpp"
#include "complex.hpp"
#include "dynamics.hpp"
#include "geometry.hpp"
#include "spectral.hpp"
#include "weighted.hpp"

namespace holeprobe {

struct TheoremInstance
{
    WeightedComplex outer;    // X~
    WeightedComplex filler;   // Y~
    double epsilon = 1.0;
    int n = 1;
    PointSet layout;          // plotting coordinates, indexed by vertex id
};

struct ConditionReport
{
    bool filtration = false;             // (1) on both complexes
    bool filler_acyclic = false;         // (2) H_n(Y) = 0
    bool homology_drops = false;         // (3) dim H_n(X u Y) = dim H_n(X) - 1
    bool glued_along_boundary = false;   // (4) X n Y = closure of the topological boundary of Y
    bool weight_ratio = false;           // (5) w(a)/w(b) <= eps for a in Y \ X, b in X n Y

    bool all() const
    {
        return filtration && filler_acyclic && homology_drops && glued_along_boundary && weight_ratio;
    }

    std::string failures() const
    {
        std::string out;
        if (!filtration) out += " filtration";
        if (!filler_acyclic) out += " filler-acyclic";
        if (!homology_drops) out += " homology-drop";
        if (!glued_along_boundary) out += " boundary-gluing";
        if (!weight_ratio) out += " weight-ratio";
        return out;
    }
};

inline ConditionReport check_conditions(const TheoremInstance& inst)
{
    const auto& X = inst.outer.complex();
    const auto& Y = inst.filler.complex();
    const int n = inst.n;
    ConditionReport r;

    r.filtration = check_filtration(inst.outer) && check_filtration(inst.filler);
    r.filler_acyclic = homology_dimension(Y, n) == 0;

    const WeightedComplex U = weighted_union(inst.outer, inst.filler);
    const std::size_t hx = homology_dimension(X, n);
    r.homology_drops = hx >= 1 && homology_dimension(U.complex(), n) + 1 == hx;

    const SimplicialComplex I = intersection(X, Y);
    const auto boundary = Y.topological_boundary(n);
    const SimplicialComplex closure = SimplicialComplex::from_simplices(boundary);
    r.glued_along_boundary = !boundary.empty() && I == closure;

    double max_interior = 0.0;
    for (const auto& a : Y.all_simplices())
        if (!X.contains(a)) max_interior = std::max(max_interior, inst.filler.weight(a));
    double min_shared = std::numeric_limits<double>::infinity();
    for (const auto& b : I.all_simplices())
        min_shared = std::min(min_shared, inst.outer.weight(b));
    r.weight_ratio = std::isfinite(min_shared) && max_interior <= inst.epsilon * min_shared * (1.0 + 1e-12);
    return r;
}

namespace detail {

/**
 * Triangulated annulus between an inner and an outer m-cycle, vertex ids
 * offset..offset+2m-1 (inner first), plus the fan disc on the inner cycle
 * centred at vertex offset+2m.
 */
struct AnnulusParts
{
    std::vector<std::vector<VertexId>> annulus;
    std::vector<std::vector<VertexId>> fan;
    VertexId center = 0;
};

inline AnnulusParts annulus_parts(std::size_t m, VertexId offset)
{
    AnnulusParts p;
    const auto M = static_cast<VertexId>(m);
    for (VertexId i = 0; i < M; ++i)
    {
        const VertexId j = (i + 1) % M;
        p.annulus.push_back({offset + i, offset + j, offset + M + i});
        p.annulus.push_back({offset + j, offset + M + i, offset + M + j});
        p.fan.push_back({offset + 2 * M, offset + i, offset + j});
    }
    p.center = offset + 2 * M;
    return p;
}

inline void annulus_layout(PointSet& layout, std::size_t m, VertexId offset, const Point& origin)
{
    layout.resize(std::max<std::size_t>(layout.size(), offset + 2 * m + 1), Point::Zero());
    for (std::size_t i = 0; i < m; ++i)
    {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m);
        layout[offset + i] = origin + Point(std::cos(a), std::sin(a));
        layout[offset + m + i] = origin + 2.0 * Point(std::cos(a), std::sin(a));
    }
    layout[offset + 2 * m] = origin;
}

/**
 * Filler weights: 1 on the glued cycle, eps on the centre vertex and the
 * spokes, eps^2 on the fan triangles.
 */
inline WeightedComplex weighted_fan(const SimplicialComplex& Y, VertexId center, double eps)
{
    std::vector<Vector> levels;
    for (int d = 0; d <= Y.dimension(); ++d)
    {
        Vector w(static_cast<Eigen::Index>(Y.size(d)));
        const auto& cells = Y.level(d);
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            const bool interior = std::find(cells[i].begin(), cells[i].end(), center) != cells[i].end();
            w(static_cast<Eigen::Index>(i)) = !interior ? 1.0 : (d == 2 ? eps * eps : eps);
        }
        levels.push_back(std::move(w));
    }
    return WeightedComplex(Y, WeightFunction(std::move(levels)));
}

}   // namespace detail

/**
 * Unit-weight annulus with one hole around an inner m-cycle, and a fan disc
 * with interior weights eps glued along that cycle.
 */
inline TheoremInstance annulus_disc_instance(std::size_t m, double eps)
{
    if (m < 3)
        throw Error(ErrorKind::Parameter, "the glued cycle needs at least 3 vertices");
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw Error(ErrorKind::Parameter, "epsilon must be positive");

    auto parts = detail::annulus_parts(m, 0);
    TheoremInstance inst;
    inst.outer = WeightedComplex::unit(build_complex(parts.annulus));
    inst.filler = detail::weighted_fan(build_complex(parts.fan), parts.center, eps);
    inst.epsilon = eps;
    inst.n = 1;
    detail::annulus_layout(inst.layout, m, 0, Point::Zero());

    const auto report = check_conditions(inst);
    if (!report.all())
        throw Error(ErrorKind::ConstructionBug, "annulus/disc instance violates:" + report.failures());
    return inst;
}

struct BoundReport
{
    double lambda = 0.0;   // smallest nonzero eigenvalue of L~_n on the union
    double bound = 0.0;    // eps (n + 1)
    bool holds = false;
    Vector eigenvector;
};

inline BoundReport verify_eigenvalue_bound(const TheoremInstance& inst)
{
    const WeightedComplex U = weighted_union(inst.outer, inst.filler);
    // Small weights push lambda toward eps^3, below any relative zero
    // threshold, so zeros are skipped by the exact homology dimension.
    const Spectrum spectrum = eig_sym(weighted_laplacian(U, inst.n));
    auto pairs = eigenpairs_after(spectrum, homology_dimension(U.complex(), inst.n), 1);
    BoundReport r;
    r.lambda = pairs.front().value;
    r.bound = inst.epsilon * static_cast<double>(inst.n + 1);
    r.holds = r.lambda <= r.bound + 1e-10;
    r.eigenvector = std::move(pairs.front().vector);
    return r;
}

struct MultiDiscInstance
{
    WeightedComplex outer;                 // k annuli chained by single edges
    std::vector<WeightedComplex> fillers;
    std::vector<double> epsilons;
    WeightedComplex combined;              // outer u all fillers
    std::vector<TheoremInstance> steps;    // (X u Y_1 .. Y_{i-1}, Y_i, eps_i)
    int n = 1;
    PointSet layout;
};

/**
 * k unit-weight annuli joined into a chain by single edges, each hole
 * filled by its own fan disc with interior weights eps_i.
 */
inline MultiDiscInstance multi_disc_instance(std::size_t k, const std::vector<double>& epsilons, std::size_t m = 6)
{
    if (k == 0)
        throw Error(ErrorKind::Parameter, "need at least one disc");
    if (epsilons.size() != k)
        throw Error(ErrorKind::Parameter, "expected " + std::to_string(k) + " epsilon values");
    if (m < 3)
        throw Error(ErrorKind::Parameter, "the glued cycle needs at least 3 vertices");

    MultiDiscInstance out;
    out.epsilons = epsilons;
    const auto stride = static_cast<VertexId>(2 * m + 1);
    std::vector<std::vector<VertexId>> outer_gens;
    std::vector<detail::AnnulusParts> parts;
    for (std::size_t i = 0; i < k; ++i)
    {
        const auto offset = static_cast<VertexId>(i) * stride;
        parts.push_back(detail::annulus_parts(m, offset));
        outer_gens.insert(outer_gens.end(), parts.back().annulus.begin(), parts.back().annulus.end());
        if (i > 0)
            outer_gens.push_back({offset - stride + static_cast<VertexId>(m), offset + static_cast<VertexId>(m)});
        detail::annulus_layout(out.layout, m, offset, Point(5.0 * static_cast<double>(i), 0.0));
    }
    out.outer = WeightedComplex::unit(build_complex(outer_gens));

    for (std::size_t i = 0; i < k; ++i)
    {
        if (!(epsilons[i] > 0.0))
            throw Error(ErrorKind::Parameter, "epsilon must be positive");
        out.fillers.push_back(detail::weighted_fan(build_complex(parts[i].fan), parts[i].center, epsilons[i]));
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (!intersection(out.fillers[i].complex(), out.fillers[j].complex()).empty())
                throw Error(ErrorKind::ConstructionBug, "filler discs overlap");

    WeightedComplex acc = out.outer;
    for (std::size_t i = 0; i < k; ++i)
    {
        TheoremInstance step{acc, out.fillers[i], epsilons[i], out.n, out.layout};
        const auto report = check_conditions(step);
        if (!report.all())
            throw Error(ErrorKind::ConstructionBug,
                        "union step " + std::to_string(i + 1) + " violates:" + report.failures());
        acc = weighted_union(acc, out.fillers[i]);
        out.steps.push_back(std::move(step));
    }
    out.combined = std::move(acc);
    return out;
}

struct MultiBoundReport
{
    std::vector<double> eigenvalues;   // k smallest nonzero, ascending
    std::vector<double> bounds;        // eps_i (n + 1), ascending
    std::vector<bool> holds;
    double max_overlap = 0.0;          // largest |<v_i, v_j>|, i != j
    bool all() const { return std::all_of(holds.begin(), holds.end(), [](bool b) { return b; }); }
};

/**
 * Compare the k smallest nonzero eigenvalues of the union with the sorted
 * bounds eps_i (n + 1). Orthogonal test vectors with these Rayleigh bounds
 * force the i-th smallest eigenvalue under the i-th smallest bound.
 */
inline MultiBoundReport verify_multi_bound(const MultiDiscInstance& inst)
{
    const std::size_t k = inst.fillers.size();
    const Spectrum spectrum = eig_sym(weighted_laplacian(inst.combined, inst.n));
    auto pairs = eigenpairs_after(spectrum, homology_dimension(inst.combined.complex(), inst.n), k);
    MultiBoundReport r;
    for (double e : inst.epsilons) r.bounds.push_back(e * static_cast<double>(inst.n + 1));
    std::sort(r.bounds.begin(), r.bounds.end());
    for (std::size_t i = 0; i < k; ++i)
    {
        r.eigenvalues.push_back(pairs[i].value);
        r.holds.push_back(pairs[i].value <= r.bounds[i] + 1e-10);
        for (std::size_t j = 0; j < i; ++j)
            r.max_overlap = std::max(r.max_overlap, std::abs(pairs[i].vector.dot(pairs[j].vector)));
    }
    return r;
}

struct RingLayout
{
    std::array<Point, 3> centers;
    std::array<double, 3> radii;
};

/**
 * Three mutually tangent circles. Unequal radii keep the three low
 * eigenvalues apart so their eigenvectors localize on individual rings.
 */
inline RingLayout three_rings_layout()
{
    RingLayout L;
    L.radii = {1.0, 0.9, 0.8};
    const double d01 = L.radii[0] + L.radii[1];
    const double d02 = L.radii[0] + L.radii[2];
    const double d12 = L.radii[1] + L.radii[2];
    L.centers[0] = Point(0.0, 0.0);
    L.centers[1] = Point(d01, 0.0);
    const double x = (d02 * d02 - d12 * d12 + d01 * d01) / (2.0 * d01);
    L.centers[2] = Point(x, std::sqrt(d02 * d02 - x * x));
    return L;
}

/**
 * Sensors sampled on three touching rings with small angular and radial
 * jitter; the count per ring is proportional to its circumference.
 */
inline PointSet three_rings_configuration(std::size_t n_sensors, std::uint64_t seed)
{
    if (n_sensors < 30)
        throw Error(ErrorKind::Parameter, "three rings need at least 30 sensors");
    const RingLayout L = three_rings_layout();
    const double total = L.radii[0] + L.radii[1] + L.radii[2];
    std::array<std::size_t, 3> counts{};
    std::size_t assigned = 0;
    for (std::size_t r = 0; r < 2; ++r)
    {
        counts[r] = static_cast<std::size_t>(std::lround(static_cast<double>(n_sensors) * L.radii[r] / total));
        assigned += counts[r];
    }
    counts[2] = n_sensors - assigned;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    PointSet points;
    points.reserve(n_sensors);
    for (std::size_t r = 0; r < 3; ++r)
    {
        const double spacing = 2.0 * std::numbers::pi / static_cast<double>(counts[r]);
        const double phase = 0.5 * spacing;   // keep samples off the tangent points
        for (std::size_t i = 0; i < counts[r]; ++i)
        {
            const double angle = phase + spacing * (static_cast<double>(i) + 0.15 * unit(rng));
            const double radius = L.radii[r] * (1.0 + 0.02 * unit(rng));
            points.push_back(L.centers[r] + radius * Point(std::cos(angle), std::sin(angle)));
        }
    }
    return points;
}

/**
 * Fraction of the squared mass of an edge chain lying on edges whose
 * midpoints are inside the given circle. The default margin admits the
 * jittered perimeter edges of a ring, which carry most of a hole's cycle.
 */
inline double mass_inside_circle(std::span<const Point> points, const SimplicialComplex& X, const Vector& v,
                                 const Point& center, double radius, double margin = 1.05)
{
    double inside = 0.0, total = 0.0;
    const auto& edges = X.level(1);
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const double m2 = v(static_cast<Eigen::Index>(i)) * v(static_cast<Eigen::Index>(i));
        total += m2;
        const Point mid = 0.5 * (points[edges[i][0]] + points[edges[i][1]]);
        if ((mid - center).norm() < margin * radius) inside += m2;
    }
    return total > 0.0 ? inside / total : 0.0;
}

struct RingsReport
{
    GeometricComplex geometry;
    std::size_t full_nullity = 0;     // dim ker of the full L~_1
    std::vector<Eigenpair> low;       // k smallest nonzero of L~_1^up
    double next = 0.0;                // the (k+1)-th nonzero eigenvalue
    std::vector<std::size_t> ring;    // ring holding most of each eigenvector
    std::vector<double> mass;         // fraction of squared mass inside that ring
};

/**
 * Spectral picture of the three-rings configuration: the full weighted
 * 1-Laplacian has trivial kernel, while the up part has k small nonzero
 * eigenvalues whose eigenvectors sit on the rings.
 */
inline RingsReport analyze_three_rings(std::size_t n_sensors, std::uint64_t seed, std::size_t k = 3)
{
    RingsReport r;
    const PointSet raw = three_rings_configuration(n_sensors, seed);
    const Point c0 = centroid(raw);
    r.geometry = build_geometric_complex(raw);
    const WeightedComplex& W = r.geometry.weighted;
    const SimplicialComplex& X = W.complex();
    r.full_nullity = laplacian_nullity(W, 1);

    // ker L~_1^up = ker B~_2^T, of dimension |X_1| - rank B_2.
    const std::size_t zeros = X.size(1) - exact_rank(boundary_matrix<int>(X, 2));
    const Spectrum up = factor_spectrum(DenseMatrix(weighted_boundary(W, 2)));
    auto pairs = eigenpairs_after(up, zeros, k + 1);
    r.next = pairs.back().value;
    pairs.pop_back();
    r.low = std::move(pairs);

    const RingLayout L = three_rings_layout();
    for (const auto& p : r.low)
    {
        std::size_t best = 0;
        double best_mass = -1.0;
        for (std::size_t j = 0; j < 3; ++j)
        {
            // Normalization scales about the centroid; move the ring with it.
            const Point center = c0 + r.geometry.scale * (L.centers[j] - c0);
            const double m = mass_inside_circle(r.geometry.points, X, p.vector, center,
                                                r.geometry.scale * L.radii[j]);
            if (m > best_mass) { best_mass = m; best = j; }
        }
        r.ring.push_back(best);
        r.mass.push_back(best_mass);
    }
    return r;
}

/** Uniform random points in the unit square. */
inline PointSet random_cloud(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PointSet points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double x = unit(rng);
        const double y = unit(rng);
        points.emplace_back(x, y);
    }
    return points;
}

}   // namespace holeprobe

#endif
