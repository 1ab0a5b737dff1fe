/**
 * Planar sensor geometry: Delaunay triangulation, inverse-length weights and
 * the rescaling that keeps every edge weight above one.
 */
#ifndef HOLEPROBE_GEOMETRY_HPP
#define HOLEPROBE_GEOMETRY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "complex.hpp"
#include "errors.hpp"
#include "weighted.hpp"

namespace holeprobe {

using Point = Eigen::Vector2d;
using PointSet = std::vector<Point>;
using Triangle = std::array<VertexId, 3>;   // ascending vertex ids

/** Longest Delaunay edge after `normalize_scale`. */
inline constexpr double kNormalizedLongestEdge = 0.9;

namespace predicates {

/**
 * Orientation of (a, b, c): positive for counter-clockwise. `scale` receives
 * the magnitude of the summed terms so callers can apply a relative
 * tolerance.
 */
inline long double orient(const Point& a, const Point& b, const Point& c, long double* scale = nullptr)
{
    const long double l = (static_cast<long double>(b.x()) - a.x()) * (static_cast<long double>(c.y()) - a.y());
    const long double r = (static_cast<long double>(b.y()) - a.y()) * (static_cast<long double>(c.x()) - a.x());
    if (scale) *scale = std::fabs(l) + std::fabs(r);
    return l - r;
}

/**
 * Positive when d lies strictly inside the circumcircle of the
 * counter-clockwise triangle (a, b, c).
 */
inline long double incircle(const Point& a, const Point& b, const Point& c, const Point& d,
                            long double* scale = nullptr)
{
    const long double adx = static_cast<long double>(a.x()) - d.x(), ady = static_cast<long double>(a.y()) - d.y();
    const long double bdx = static_cast<long double>(b.x()) - d.x(), bdy = static_cast<long double>(b.y()) - d.y();
    const long double cdx = static_cast<long double>(c.x()) - d.x(), cdy = static_cast<long double>(c.y()) - d.y();
    const long double alift = adx * adx + ady * ady;
    const long double blift = bdx * bdx + bdy * bdy;
    const long double clift = cdx * cdx + cdy * cdy;
    const long double bc = bdx * cdy - bdy * cdx;
    const long double ca = cdx * ady - cdy * adx;
    const long double ab = adx * bdy - ady * bdx;
    if (scale)
        *scale = alift * (std::fabs(bdx * cdy) + std::fabs(bdy * cdx)) +
                 blift * (std::fabs(cdx * ady) + std::fabs(cdy * adx)) +
                 clift * (std::fabs(adx * bdy) + std::fabs(ady * bdx));
    return alift * bc + blift * ca + clift * ab;
}

inline constexpr long double kRelTol = 1e-12L;

/** Sign of incircle with a relative dead zone; 0 means cocircular. */
inline int incircle_sign(const Point& a, const Point& b, const Point& c, const Point& d)
{
    long double scale = 0;
    long double det = incircle(a, b, c, d, &scale);
    if (std::fabs(det) <= kRelTol * scale) return 0;
    return det > 0 ? 1 : -1;
}

inline int orient_sign(const Point& a, const Point& b, const Point& c)
{
    long double scale = 0;
    long double det = orient(a, b, c, &scale);
    if (std::fabs(det) <= kRelTol * scale) return 0;
    return det > 0 ? 1 : -1;
}

}   // namespace predicates

/**
 * Reject configurations that cannot be triangulated: fewer than 3 points,
 * non-finite coordinates, duplicates, or all points collinear.
 */
inline void validate_configuration(std::span<const Point> points)
{
    if (points.size() < 3)
        throw Error(ErrorKind::DegenerateInput, "need at least 3 points, got " + std::to_string(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        if (!points[i].allFinite())
            throw Error(ErrorKind::DegenerateInput, "point " + std::to_string(i) + " is not finite");

    std::vector<std::size_t> order(points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::make_pair(points[a].x(), points[a].y()) < std::make_pair(points[b].x(), points[b].y());
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (points[order[i]] == points[order[i - 1]])
            throw Error(ErrorKind::DegenerateInput,
                        "points " + std::to_string(order[i - 1]) + " and " + std::to_string(order[i]) + " coincide");

    for (std::size_t i = 2; i < points.size(); ++i)
        if (predicates::orient_sign(points[0], points[1], points[i]) != 0)
            return;
    throw Error(ErrorKind::DegenerateInput, "all points are collinear");
}

namespace detail {

struct WorkTriangle
{
    std::array<std::size_t, 3> v;   // counter-clockwise
    bool alive = true;
};

inline std::pair<std::size_t, std::size_t> edge_key(std::size_t a, std::size_t b)
{
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

inline std::size_t convex_hull_size(std::span<const Point> points)
{
    // Monotone chain keeping collinear boundary points.
    std::vector<std::size_t> idx(points.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return std::make_pair(points[a].x(), points[a].y()) < std::make_pair(points[b].x(), points[b].y());
    });
    std::vector<std::size_t> hull;
    auto build = [&](auto begin, auto end) {
        std::size_t base = hull.size();
        for (auto it = begin; it != end; ++it)
        {
            while (hull.size() >= base + 2 &&
                   predicates::orient_sign(points[hull[hull.size() - 2]], points[hull.back()], points[*it]) < 0)
                hull.pop_back();
            hull.push_back(*it);
        }
        hull.pop_back();
    };
    build(idx.begin(), idx.end());
    build(idx.rbegin(), idx.rend());
    std::set<std::size_t> unique(hull.begin(), hull.end());
    return unique.size();
}

/**
 * Lawson flips: repair any non-Delaunay edge and, among cocircular
 * quadrilaterals, prefer the lexicographically smaller diagonal.
 */
inline void legalize(std::span<const Point> points, std::vector<std::array<std::size_t, 3>>& tris)
{
    for (int pass = 0; pass < 10000; ++pass)
    {
        std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> edge_tris;
        for (std::size_t t = 0; t < tris.size(); ++t)
            for (int e = 0; e < 3; ++e)
                edge_tris[edge_key(tris[t][e], tris[t][(e + 1) % 3])].push_back(t);

        bool flipped = false;
        for (const auto& [edge, owners] : edge_tris)
        {
            if (owners.size() != 2) continue;
            const auto [a, b] = edge;
            auto opposite = [&](std::size_t t) {
                for (auto v : tris[t]) if (v != a && v != b) return v;
                return tris[t][0];
            };
            std::size_t c = opposite(owners[0]);
            std::size_t d = opposite(owners[1]);
            // Orient (a, b, c) counter-clockwise for the incircle test.
            std::size_t p = a, q = b;
            if (predicates::orient_sign(points[p], points[q], points[c]) < 0) std::swap(p, q);
            const int in = predicates::incircle_sign(points[p], points[q], points[c], points[d]);
            bool flip = in > 0 || (in == 0 && edge_key(c, d) < edge);
            if (!flip) continue;
            // The new diagonal must split a strictly convex quadrilateral.
            if (predicates::orient_sign(points[c], points[d], points[p]) *
                    predicates::orient_sign(points[c], points[d], points[q]) >= 0)
                continue;
            auto ccw = [&](std::size_t x, std::size_t y, std::size_t z) {
                return predicates::orient_sign(points[x], points[y], points[z]) > 0
                    ? std::array<std::size_t, 3>{x, y, z} : std::array<std::size_t, 3>{x, z, y};
            };
            tris[owners[0]] = ccw(c, d, p);
            tris[owners[1]] = ccw(c, d, q);
            flipped = true;
            break;   // adjacency is stale after a flip
        }
        if (!flipped) return;
    }
    throw Error(ErrorKind::Numeric, "edge flipping did not terminate");
}

}   // namespace detail

/**
 * Delaunay triangles (ascending vertex ids, sorted) by Bowyer-Watson
 * insertion in index order followed by Lawson legalisation.
 *
 * Cocircular ties are broken toward the lexicographically smallest diagonal,
 * so the output depends only on the input coordinates.
 */
inline std::vector<Triangle> delaunay_triangles(std::span<const Point> points)
{
    validate_configuration(points);
    const std::size_t n = points.size();

    Point lo = points[0], hi = points[0];
    for (const auto& p : points)
    {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Point mid = 0.5 * (lo + hi);
    const double extent = std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1e-300});
    const double big = 1e6 * extent;

    std::vector<Point> all(points.begin(), points.end());
    all.push_back(mid + Point(-big, -big));
    all.push_back(mid + Point(big, -big));
    all.push_back(mid + Point(0.0, big));

    std::vector<detail::WorkTriangle> tris;
    tris.push_back({{n, n + 1, n + 2}, true});

    for (std::size_t p = 0; p < n; ++p)
    {
        std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
        std::vector<std::pair<std::size_t, std::size_t>> directed;
        for (auto& t : tris)
        {
            if (!t.alive) continue;
            if (predicates::incircle_sign(all[t.v[0]], all[t.v[1]], all[t.v[2]], all[p]) > 0)
            {
                t.alive = false;
                for (int e = 0; e < 3; ++e)
                {
                    std::size_t a = t.v[e], b = t.v[(e + 1) % 3];
                    ++edge_count[detail::edge_key(a, b)];
                    directed.emplace_back(a, b);
                }
            }
        }
        if (directed.empty())
        {
            // p sits on circumcircles only; fall back to the triangle containing it.
            for (auto& t : tris)
            {
                if (!t.alive) continue;
                bool inside = true;
                for (int e = 0; e < 3; ++e)
                    if (predicates::orient_sign(all[t.v[e]], all[t.v[(e + 1) % 3]], all[p]) < 0)
                        inside = false;
                if (!inside) continue;
                t.alive = false;
                for (int e = 0; e < 3; ++e)
                {
                    std::size_t a = t.v[e], b = t.v[(e + 1) % 3];
                    ++edge_count[detail::edge_key(a, b)];
                    directed.emplace_back(a, b);
                }
                break;
            }
        }
        for (const auto& [a, b] : directed)
        {
            if (edge_count[detail::edge_key(a, b)] != 1) continue;
            if (predicates::orient_sign(all[a], all[b], all[p]) == 0) continue;
            tris.push_back({{a, b, p}, true});
        }
        tris.erase(std::remove_if(tris.begin(), tris.end(), [](const auto& t) { return !t.alive; }), tris.end());
    }

    std::vector<std::array<std::size_t, 3>> kept;
    for (const auto& t : tris)
        if (t.v[0] < n && t.v[1] < n && t.v[2] < n)
            kept.push_back(t.v);

    detail::legalize(points, kept);

    // A triangulation of n points with h on the hull has 2n - h - 2 triangles.
    const std::size_t hull = detail::convex_hull_size(points);
    if (kept.size() != 2 * n - hull - 2)
        throw Error(ErrorKind::DegenerateInput,
                    "triangulation produced " + std::to_string(kept.size()) + " triangles, expected " +
                        std::to_string(2 * n - hull - 2));

    std::vector<Triangle> out;
    out.reserve(kept.size());
    for (const auto& t : kept)
    {
        Triangle s{static_cast<VertexId>(t[0]), static_cast<VertexId>(t[1]), static_cast<VertexId>(t[2])};
        std::sort(s.begin(), s.end());
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/** Complex whose 2-simplices are the (filled) Delaunay triangles. */
inline SimplicialComplex delaunay(std::span<const Point> points)
{
    std::vector<std::vector<VertexId>> generators;
    for (const auto& t : delaunay_triangles(points))
        generators.push_back({t[0], t[1], t[2]});
    return build_complex(generators);
}

inline double edge_length(std::span<const Point> points, const Simplex& e)
{
    return (points[e[0]] - points[e[1]]).norm();
}

/** Longest edge of X measured in `points`. */
inline double longest_edge(std::span<const Point> points, const SimplicialComplex& X)
{
    double longest = 0.0;
    for (const auto& e : X.level(1))
        longest = std::max(longest, edge_length(points, e));
    return longest;
}

/**
 * w_1(e) = 1 / |e|, w_2(t) = product of its three edge weights, and
 * w_0(v) = the largest weight among edges at v (1 for an isolated vertex).
 */
inline WeightFunction geometric_weights(std::span<const Point> points, const SimplicialComplex& X)
{
    std::vector<Vector> levels;
    const int top = X.dimension();
    if (top > 2)
        throw Error(ErrorKind::Parameter, "geometric weights are defined up to dimension 2");
    for (int n = 0; n <= top; ++n)
        levels.push_back(Vector::Zero(static_cast<Eigen::Index>(X.size(n))));
    for (const auto& v : X.level(0))
        if (v[0] >= points.size())
            throw Error(ErrorKind::Parameter, "vertex " + std::to_string(v[0]) + " has no coordinates");

    if (top >= 1)
    {
        const auto& edges = X.level(1);
        for (std::size_t i = 0; i < edges.size(); ++i)
        {
            const double len = edge_length(points, edges[i]);
            if (!(len > 0.0))
                throw Error(ErrorKind::DegenerateInput, "zero-length edge " + edges[i].str());
            levels[1](static_cast<Eigen::Index>(i)) = 1.0 / len;
        }
        for (std::size_t i = 0; i < edges.size(); ++i)
            for (VertexId v : edges[i])
            {
                auto& w0 = levels[0](static_cast<Eigen::Index>(X.require_index(Simplex{v})));
                w0 = std::max(w0, levels[1](static_cast<Eigen::Index>(i)));
            }
    }
    for (Eigen::Index i = 0; i < levels[0].size(); ++i)
        if (levels[0](i) == 0.0) levels[0](i) = 1.0;

    if (top >= 2)
    {
        const auto& faces = X.level(2);
        for (std::size_t i = 0; i < faces.size(); ++i)
        {
            double w = 1.0;
            for (std::size_t k = 0; k < 3; ++k)
                w *= levels[1](static_cast<Eigen::Index>(X.require_index(faces[i].face(k))));
            levels[2](static_cast<Eigen::Index>(i)) = w;
        }
    }
    return WeightFunction(std::move(levels));
}

inline Point centroid(std::span<const Point> points)
{
    Point c = Point::Zero();
    for (const auto& p : points) c += p;
    return c / static_cast<double>(points.size());
}

/** Uniform scaling about the centroid. */
inline PointSet scale_about_centroid(std::span<const Point> points, double scale)
{
    const Point c = centroid(points);
    PointSet out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(c + scale * (p - c));
    return out;
}

struct NormalizedPoints
{
    PointSet points;
    double scale = 1.0;
};

/**
 * Shrink the configuration about its centroid until the longest Delaunay
 * edge is at most 0.9. Inputs that already satisfy this are returned as-is.
 */
inline NormalizedPoints normalize_scale(std::span<const Point> points)
{
    const double longest = longest_edge(points, delaunay(points));
    NormalizedPoints out;
    if (longest <= kNormalizedLongestEdge)
    {
        out.points.assign(points.begin(), points.end());
        return out;
    }
    out.scale = kNormalizedLongestEdge / longest;
    out.points = scale_about_centroid(points, out.scale);
    return out;
}

/**
 * A Delaunay weighted complex together with the coordinates it was built
 * from.
 */
struct GeometricComplex
{
    PointSet points;   // normalized coordinates
    double scale = 1.0;
    WeightedComplex weighted;
};

inline GeometricComplex build_geometric_complex(std::span<const Point> points)
{
    auto normalized = normalize_scale(points);
    SimplicialComplex X = delaunay(normalized.points);
    auto weights = geometric_weights(normalized.points, X);
    GeometricComplex out;
    out.points = std::move(normalized.points);
    out.scale = normalized.scale;
    out.weighted = WeightedComplex(std::move(X), std::move(weights));
    return out;
}

inline WeightedComplex build_weighted_complex(std::span<const Point> points)
{
    return build_geometric_complex(points).weighted;
}

}   // namespace holeprobe

#endif
