/**
 * File formats: complexes and weighted complexes as JSON, point sets as CSV
 * or JSON, spectra as JSON, trajectories as JSONL, and MatrixMarket export.
 *
 * Requires nlohmann/json on the include path.
 */
#ifndef HOLEPROBE_IO_HPP
#define HOLEPROBE_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "complex.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "spectral.hpp"
#include "weighted.hpp"

namespace holeprobe::io {

using Json = nlohmann::ordered_json;

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Parse, "cannot write " + path);
    out << text;
}

/** Shortest decimal text that parses back to exactly the same double. */
inline std::string format_double(double x)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

inline Json parse_json(const std::string& text)
{
    try
    {
        return Json::parse(text);
    }
    catch (const Json::parse_error& e)
    {
        throw Error(ErrorKind::Parse, e.what());
    }
}

// ---- complexes ----------------------------------------------------------

inline Json complex_to_json(const SimplicialComplex& X)
{
    Json gens = Json::array();
    for (const auto& f : X.facets())
        gens.push_back(f.vertices());
    return Json{{"generators", gens}};
}

inline SimplicialComplex complex_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        throw Error(ErrorKind::Parse, "complex JSON needs a \"generators\" array");
    std::vector<std::vector<VertexId>> gens;
    try
    {
        for (const auto& g : j["generators"])
            gens.push_back(g.get<std::vector<VertexId>>());
    }
    catch (const Json::exception& e)
    {
        throw Error(ErrorKind::Parse, std::string("bad generator: ") + e.what());
    }
    return build_complex(gens);
}

inline Json weighted_to_json(const WeightedComplex& X)
{
    Json j = complex_to_json(X.complex());
    Json w = Json::object();
    for (int n = 0; n <= X.complex().dimension(); ++n)
    {
        const Vector& lv = X.weights().level(n);
        w[std::to_string(n)] = std::vector<double>(lv.data(), lv.data() + lv.size());
    }
    j["weights"] = w;
    return j;
}

/** Weights are listed per dimension in the level ordering of the closed complex. */
inline WeightedComplex weighted_from_json(const Json& j)
{
    SimplicialComplex X = complex_from_json(j);
    if (!j.contains("weights"))
        return WeightedComplex::unit(std::move(X));
    const Json& w = j["weights"];
    if (!w.is_object())
        throw Error(ErrorKind::Parse, "\"weights\" must be an object keyed by dimension");
    std::vector<Vector> levels;
    for (int n = 0; n <= X.dimension(); ++n)
    {
        const std::string key = std::to_string(n);
        if (!w.contains(key))
            throw Error(ErrorKind::Parse, "missing weights for dimension " + key);
        std::vector<double> vals;
        try
        {
            vals = w[key].get<std::vector<double>>();
        }
        catch (const Json::exception& e)
        {
            throw Error(ErrorKind::Parse, std::string("bad weights: ") + e.what());
        }
        levels.emplace_back(Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size())));
    }
    return WeightedComplex(std::move(X), WeightFunction(std::move(levels)));
}

// ---- points -------------------------------------------------------------

inline std::string points_to_csv(std::span<const Point> points)
{
    std::string out = "id,x,y\n";
    for (std::size_t i = 0; i < points.size(); ++i)
        out += std::to_string(i) + "," + format_double(points[i].x()) + "," + format_double(points[i].y()) + "\n";
    return out;
}

namespace detail {

inline double parse_number(std::string_view field, std::size_t line)
{
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
    return value;
}

}   // namespace detail

/**
 * Rows "id,x,y" after a header. Ids must be 0..n-1 in some order; the
 * returned points are ordered by id.
 */
inline PointSet points_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<std::pair<long long, Point>> rows;
    while (std::getline(in, line))
    {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!header)
        {
            header = true;
            if (line.find_first_of("0123456789") == std::string::npos || line.rfind("id", 0) == 0)
                continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1))
            fields.push_back(rest.substr(0, pos));
        fields.push_back(rest);
        if (fields.size() != 3)
            throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": expected id,x,y");
        const double id = detail::parse_number(fields[0], lineno);
        if (id < 0 || id != static_cast<double>(static_cast<long long>(id)))
            throw Error(ErrorKind::Parse, "line " + std::to_string(lineno) + ": id must be a non-negative integer");
        rows.emplace_back(static_cast<long long>(id),
                          Point(detail::parse_number(fields[1], lineno), detail::parse_number(fields[2], lineno)));
    }
    PointSet points(rows.size());
    std::vector<bool> seen(rows.size(), false);
    for (const auto& [id, p] : rows)
    {
        if (id >= static_cast<long long>(rows.size()) || seen[static_cast<std::size_t>(id)])
            throw Error(ErrorKind::Parse, "ids must be 0.." + std::to_string(rows.size()) + "-1 without repeats");
        seen[static_cast<std::size_t>(id)] = true;
        points[static_cast<std::size_t>(id)] = p;
    }
    return points;
}

inline Json points_to_json(std::span<const Point> points)
{
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back({p.x(), p.y()});
    return Json{{"points", arr}};
}

inline PointSet points_from_json(const Json& j)
{
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
        throw Error(ErrorKind::Parse, "points JSON needs a \"points\" array");
    PointSet out;
    for (const auto& p : j["points"])
    {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw Error(ErrorKind::Parse, "each point must be [x, y]");
        out.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return out;
}

/** JSON if the content starts with '{', CSV otherwise. */
inline PointSet load_points(const std::string& path)
{
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return points_from_json(parse_json(text));
    return points_from_csv(text);
}

// ---- spectra and trajectories ------------------------------------------

inline Json spectrum_to_json(const Spectrum& s, std::size_t k, bool with_vectors)
{
    const auto count = std::min<Eigen::Index>(static_cast<Eigen::Index>(k), s.eigenvalues.size());
    Json vals = Json::array();
    for (Eigen::Index i = 0; i < count; ++i) vals.push_back(s.eigenvalues(i));
    Json j{{"eigenvalues", vals}, {"zero_tol", s.zero_tol}, {"nullity", s.nullity()}};
    if (with_vectors && s.eigenvectors.cols() == s.eigenvalues.size())
    {
        Json vecs = Json::array();
        for (Eigen::Index i = 0; i < count; ++i)
        {
            const Vector v = s.eigenvectors.col(i);
            vecs.push_back(std::vector<double>(v.data(), v.data() + v.size()));
        }
        j["eigenvectors"] = vecs;
    }
    return j;
}

inline Json step_to_json(const TrajectoryStep& s)
{
    Json pos = Json::array();
    for (const auto& p : s.positions) pos.push_back({p.x(), p.y()});
    return Json{{"step", s.step},
                {"lambda", s.lambda},
                {"positions", pos},
                {"accepted", s.accepted},
                {"step_size", s.step_size},
                {"combinatorics_changed", s.combinatorics_changed},
                {"degenerate", s.degenerate},
                {"smallest", s.smallest}};
}

inline std::string trajectory_to_jsonl(const Trajectory& t)
{
    std::string out;
    for (const auto& s : t.steps)
    {
        out += step_to_json(s).dump();
        out += '\n';
    }
    return out;
}

// ---- matrices -----------------------------------------------------------

inline std::string to_matrix_market(const SparseMatrix& M)
{
    std::string out = "%%MatrixMarket matrix coordinate real general\n";
    out += std::to_string(M.rows()) + " " + std::to_string(M.cols()) + " " + std::to_string(M.nonZeros()) + "\n";
    for (Eigen::Index k = 0; k < M.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(M, k); it; ++it)
            out += std::to_string(it.row() + 1) + " " + std::to_string(it.col() + 1) + " " +
                   format_double(it.value()) + "\n";
    return out;
}

}   // namespace holeprobe::io

#endif
