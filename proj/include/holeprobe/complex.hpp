/**
 * Finite abstract simplicial complexes with a canonical (ascending vertex)
 * orientation.
 *
 * A complex stores one ordered registry per dimension. Registries are sorted
 * lexicographically on the vertex tuples, so every matrix assembled from a
 * complex is reproducible regardless of the order in which generators were
 * supplied.
 */
#ifndef HOLEPROBE_COMPLEX_HPP
#define HOLEPROBE_COMPLEX_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"

namespace holeprobe {

using VertexId = std::uint32_t;

/**
 * A simplex is a strictly increasing tuple of vertex ids.
 */
class Simplex
{
    public:
        Simplex() = default;

        /**
         * Sort and validate a vertex list. Duplicates and empty lists are
         * rejected.
         */
        explicit Simplex(std::vector<VertexId> vertices) : vertices_(std::move(vertices))
        {
            if (vertices_.empty())
                throw Error(ErrorKind::InvalidSimplex, "a simplex needs at least one vertex");
            std::sort(vertices_.begin(), vertices_.end());
            if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
                throw Error(ErrorKind::InvalidSimplex, "repeated vertex in simplex");
        }

        Simplex(std::initializer_list<VertexId> vertices)
            : Simplex(std::vector<VertexId>(vertices))
        {
        }

        int dim() const { return static_cast<int>(vertices_.size()) - 1; }
        std::size_t size() const { return vertices_.size(); }
        VertexId operator[](std::size_t i) const { return vertices_[i]; }
        const std::vector<VertexId>& vertices() const { return vertices_; }
        auto begin() const { return vertices_.begin(); }
        auto end() const { return vertices_.end(); }

        /** The face obtained by deleting the i-th vertex (0-based). */
        Simplex face(std::size_t i) const
        {
            std::vector<VertexId> out;
            out.reserve(vertices_.size() - 1);
            for (std::size_t j = 0; j < vertices_.size(); ++j)
                if (j != i) out.push_back(vertices_[j]);
            Simplex s;
            s.vertices_ = std::move(out);
            return s;
        }

        bool is_subset_of(const Simplex& other) const
        {
            return std::includes(other.vertices_.begin(), other.vertices_.end(),
                                 vertices_.begin(), vertices_.end());
        }

        std::string str() const
        {
            std::string out = "{";
            for (std::size_t i = 0; i < vertices_.size(); ++i)
            {
                if (i) out += ",";
                out += std::to_string(vertices_[i]);
            }
            return out + "}";
        }

        friend auto operator<=>(const Simplex&, const Simplex&) = default;
        friend bool operator==(const Simplex&, const Simplex&) = default;

    private:
        std::vector<VertexId> vertices_;
};

/**
 * Sign of b in the boundary of c: (-1)^i when b is c with its i-th vertex
 * removed, 0 when b is not a codimension-one face of c.
 */
inline int orientation_sign(const Simplex& b, const Simplex& c)
{
    if (b.size() + 1 != c.size())
        return 0;
    std::size_t i = 0;
    while (i < b.size() && b[i] == c[i])
        ++i;
    // c[i] is the removed vertex; the remainder of b must match c shifted by one.
    for (std::size_t j = i; j < b.size(); ++j)
        if (b[j] != c[j + 1]) return 0;
    return (i % 2 == 0) ? 1 : -1;
}

/**
 * Immutable simplicial complex, closed under inclusion.
 */
class SimplicialComplex
{
    public:
        SimplicialComplex() = default;

        /**
         * Closure of a family of generators: every generator and every
         * nonempty subset of it is registered.
         */
        static SimplicialComplex from_generators(const std::vector<std::vector<VertexId>>& generators)
        {
            std::vector<std::set<Simplex>> levels;
            for (const auto& g : generators)
            {
                Simplex s(g);
                if (s.size() > 24)
                    throw Error(ErrorKind::InvalidSimplex, "generator too large to close: " + s.str());
                add_closure(s, levels);
            }
            return SimplicialComplex(levels);
        }

        static SimplicialComplex from_simplices(const std::vector<Simplex>& simplices)
        {
            std::vector<std::set<Simplex>> levels;
            for (const auto& s : simplices)
                add_closure(s, levels);
            return SimplicialComplex(levels);
        }

        /** Highest dimension with a nonempty level; -1 for the empty complex. */
        int dimension() const { return static_cast<int>(levels_.size()) - 1; }

        bool empty() const { return levels_.empty(); }

        /** |X_n|; zero for n < 0 or n above the dimension. */
        std::size_t size(int n) const
        {
            if (n < 0 || n > dimension()) return 0;
            return levels_[n].size();
        }

        std::size_t total_size() const
        {
            std::size_t total = 0;
            for (const auto& level : levels_) total += level.size();
            return total;
        }

        const Simplex& simplex(int n, std::size_t i) const
        {
            if (i >= size(n))
                throw Error(ErrorKind::IndexOutOfRange,
                            "index " + std::to_string(i) + " in level " + std::to_string(n));
            return levels_[n][i];
        }

        /** The ordered registry X_n (empty outside the stored range). */
        const std::vector<Simplex>& level(int n) const
        {
            static const std::vector<Simplex> none;
            if (n < 0 || n > dimension()) return none;
            return levels_[n];
        }

        std::optional<std::size_t> index_of(const Simplex& s) const
        {
            int n = s.dim();
            if (n > dimension()) return std::nullopt;
            auto it = index_[n].find(s);
            if (it == index_[n].end()) return std::nullopt;
            return it->second;
        }

        bool contains(const Simplex& s) const { return index_of(s).has_value(); }

        std::size_t require_index(const Simplex& s) const
        {
            auto idx = index_of(s);
            if (!idx) throw Error(ErrorKind::NotFound, s.str() + " is not in the complex");
            return *idx;
        }

        /** Every simplex, in dimension-major order. */
        std::vector<Simplex> all_simplices() const
        {
            std::vector<Simplex> out;
            for (const auto& level : levels_)
                out.insert(out.end(), level.begin(), level.end());
            return out;
        }

        /** Maximal simplices, suitable for re-serialising as generators. */
        std::vector<Simplex> facets() const
        {
            std::vector<Simplex> out;
            for (int n = 0; n <= dimension(); ++n)
                for (const auto& s : levels_[n])
                    if (cofaces(s).empty()) out.push_back(s);
            return out;
        }

        /** All (n+1)-simplices containing c. */
        std::vector<Simplex> cofaces(const Simplex& c) const
        {
            require_index(c);
            std::vector<Simplex> out;
            for (const auto& f : level(c.dim() + 1))
                if (c.is_subset_of(f)) out.push_back(f);
            return out;
        }

        /** Number of (n+1)-cofaces of every n-simplex, aligned with X_n. */
        std::vector<std::size_t> coface_counts(int n) const
        {
            std::vector<std::size_t> counts(size(n), 0);
            for (const auto& f : level(n + 1))
                for (std::size_t i = 0; i < f.size(); ++i)
                    ++counts[index_.at(n).at(f.face(i))];
            return counts;
        }

        /** n-simplices with exactly one coface. */
        std::vector<Simplex> topological_boundary(int n) const
        {
            std::vector<Simplex> out;
            auto counts = coface_counts(n);
            for (std::size_t i = 0; i < counts.size(); ++i)
                if (counts[i] == 1) out.push_back(levels_[n][i]);
            return out;
        }

        bool operator==(const SimplicialComplex& other) const { return levels_ == other.levels_; }

    private:
        std::vector<std::vector<Simplex>> levels_;
        std::vector<std::map<Simplex, std::size_t>> index_;

        explicit SimplicialComplex(const std::vector<std::set<Simplex>>& levels)
        {
            std::size_t top = levels.size();
            while (top > 0 && levels[top - 1].empty()) --top;
            levels_.resize(top);
            index_.resize(top);
            for (std::size_t n = 0; n < top; ++n)
            {
                levels_[n].assign(levels[n].begin(), levels[n].end());
                for (std::size_t i = 0; i < levels_[n].size(); ++i)
                    index_[n].emplace(levels_[n][i], i);
            }
        }

        static void add_closure(const Simplex& s, std::vector<std::set<Simplex>>& levels)
        {
            std::size_t d = static_cast<std::size_t>(s.dim());
            if (levels.size() <= d) levels.resize(d + 1);
            if (!levels[d].insert(s).second)
                return;   // already present, so its faces are too
            if (d == 0) return;
            for (std::size_t i = 0; i < s.size(); ++i)
                add_closure(s.face(i), levels);
        }
};

/** Closure of `generators`; an empty list yields the empty complex. */
inline SimplicialComplex build_complex(const std::vector<std::vector<VertexId>>& generators)
{
    return SimplicialComplex::from_generators(generators);
}

inline std::vector<Simplex> topological_boundary(const SimplicialComplex& X, int n)
{
    return X.topological_boundary(n);
}

inline std::vector<Simplex> cofaces(const SimplicialComplex& X, const Simplex& c)
{
    return X.cofaces(c);
}

/** Simplices common to both complexes (the intersection is again a complex). */
inline SimplicialComplex intersection(const SimplicialComplex& X, const SimplicialComplex& Y)
{
    std::vector<Simplex> common;
    for (const auto& s : X.all_simplices())
        if (Y.contains(s)) common.push_back(s);
    return SimplicialComplex::from_simplices(common);
}

inline SimplicialComplex complex_union(const SimplicialComplex& X, const SimplicialComplex& Y)
{
    auto all = X.all_simplices();
    auto more = Y.all_simplices();
    all.insert(all.end(), more.begin(), more.end());
    return SimplicialComplex::from_simplices(all);
}

}   // namespace holeprobe

#endif
