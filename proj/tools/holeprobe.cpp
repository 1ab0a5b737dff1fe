// holeprobe: spectra, coverage repair, caging and bound verification for
// weighted Delaunay complexes of planar sensor sets.
//
// Exit codes: 0 success, 1 usage, 2 input or data error, 3 numeric failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <holeprobe/dynamics.hpp>
#include <holeprobe/harness.hpp>
#include <holeprobe/io.hpp>

namespace hp = holeprobe;
namespace fs = std::filesystem;
using hp::io::Json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

int exit_code(hp::ErrorKind kind)
{
    switch (kind)
    {
        case hp::ErrorKind::Numeric:
        case hp::ErrorKind::Multiplicity:
        case hp::ErrorKind::FlipDetected:
        case hp::ErrorKind::ConstructionBug:
            return kNumeric;
        case hp::ErrorKind::Parameter:
            return kUsage;
        default:
            return kData;
    }
}

struct Config
{
    std::string input;
    std::string output;
    std::string final_csv;
    std::string matrix_market;
    int dim = 1;
    std::size_t k = 0;   // 0: per-command default
    std::size_t steps = 100;
    double step_size = 1e-2;
    double zero_tol = hp::kDefaultZeroTol;
    std::uint64_t seed = 2024;
    std::size_t sensors = 120;
    bool line_search = true;
    bool full_laplacian = false;
    bool emit_eigenvectors = false;
    bool multi = false;
    std::vector<std::size_t> cycle_lengths{4, 6, 10};
    std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
    std::string demo_name;
};

void emit(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-")
        std::cout << text;
    else
        hp::io::write_file(path, text);
}

std::vector<double> head(const hp::Spectrum& s, std::size_t from, std::size_t k)
{
    std::vector<double> out;
    for (auto i = static_cast<Eigen::Index>(from); i < s.eigenvalues.size() && out.size() < k; ++i)
        out.push_back(s.eigenvalues(i));
    return out;
}

/** Full L~_n spectrum head plus the smallest nonzero eigenvalues of the up part. */
Json spectrum_report(const hp::WeightedComplex& W, int n, std::size_t k, double tol, bool vectors)
{
    const hp::Spectrum full = hp::laplacian_spectrum(W, n, tol, vectors);
    Json j = hp::io::spectrum_to_json(full, k, vectors);
    const auto& X = W.complex();
    if (X.size(n + 1) > 0)
    {
        const hp::Spectrum up = hp::factor_spectrum(hp::DenseMatrix(hp::weighted_boundary(W, n + 1)), tol, false);
        const std::size_t rank = hp::exact_rank(hp::boundary_matrix<int>(X, n + 1));
        j["up_nonzero_eigenvalues"] = head(up, X.size(n) - rank, k);
    }
    else
    {
        j["up_nonzero_eigenvalues"] = Json::array();
    }
    return j;
}

std::string edge_coloring_csv(const hp::SimplicialComplex& X, const hp::Vector& v)
{
    std::string out = "u,v,coefficient,magnitude\n";
    const auto& edges = X.level(1);
    for (std::size_t i = 0; i < edges.size(); ++i)
    {
        const double c = v(static_cast<Eigen::Index>(i));
        out += std::to_string(edges[i][0]) + "," + std::to_string(edges[i][1]) + "," +
               hp::io::format_double(c) + "," + hp::io::format_double(std::abs(c)) + "\n";
    }
    return out;
}

std::string final_csv_path(const Config& c)
{
    if (!c.final_csv.empty()) return c.final_csv;
    if (c.output.empty() || c.output == "-") return {};
    fs::path p(c.output);
    p.replace_extension(".final.csv");
    return p.string();
}

int cmd_spectrum(const Config& c)
{
    const auto points = hp::io::load_points(c.input);
    const auto W = hp::build_weighted_complex(points);
    if (c.dim < 0 || c.dim > W.complex().dimension())
        throw hp::Error(hp::ErrorKind::InsufficientSpectrum,
                        "the complex has no simplices of dimension " + std::to_string(c.dim));
    Json j{{"dim", c.dim}};
    j.update(spectrum_report(W, c.dim, c.k ? c.k : 10, c.zero_tol, c.emit_eigenvectors));
    emit(c.output, j.dump(2) + "\n");
    if (!c.matrix_market.empty())
        hp::io::write_file(c.matrix_market, hp::io::to_matrix_market(hp::weighted_laplacian(W, c.dim)));
    return kOk;
}

int run_and_write(const Config& c, const hp::Trajectory& t)
{
    emit(c.output, hp::io::trajectory_to_jsonl(t));
    if (const auto path = final_csv_path(c); !path.empty())
        hp::io::write_file(path, hp::io::points_to_csv(t.final().positions));
    return kOk;
}

hp::RunOptions run_options(const Config& c)
{
    hp::RunOptions o;
    o.steps = c.steps;
    o.step_size = c.step_size;
    o.line_search = c.line_search;
    o.laplacian = c.full_laplacian ? hp::LaplacianKind::Full : hp::LaplacianKind::Up;
    return o;
}

int cmd_repair(const Config& c)
{
    const auto points = hp::io::load_points(c.input);
    return run_and_write(c, hp::repair_run(points, run_options(c)));
}

int cmd_cage(const Config& c)
{
    const auto points = hp::io::load_points(c.input);
    return run_and_write(c, hp::caging_run(points, c.k ? c.k : 3, run_options(c)));
}

int cmd_verify(const Config& c)
{
    if (c.dim != 1)
        throw hp::Error(hp::ErrorKind::Parameter, "the annulus/disc family is built for n = 1");
    Json instances = Json::array();
    bool all = true;
    for (std::size_t m : c.cycle_lengths)
        for (double eps : c.epsilons)
        {
            const auto r = hp::verify_eigenvalue_bound(hp::annulus_disc_instance(m, eps));
            instances.push_back({{"m", m}, {"epsilon", eps}, {"n", 1}, {"lambda", r.lambda},
                                 {"bound", r.bound}, {"holds", r.holds}});
            all = all && r.holds;
        }
    Json report{{"instances", instances}};
    if (c.multi)
    {
        const auto r = hp::verify_multi_bound(hp::multi_disc_instance(c.epsilons.size(), c.epsilons));
        report["multi"] = {{"epsilons", c.epsilons}, {"eigenvalues", r.eigenvalues}, {"bounds", r.bounds},
                           {"holds", r.all()}, {"max_overlap", r.max_overlap}};
        all = all && r.all();
    }
    report["all_hold"] = all;
    emit(c.output, report.dump(2) + "\n");
    return kOk;
}

int cmd_demo(const Config& c)
{
    if (c.output.empty())
        throw hp::Error(hp::ErrorKind::Parameter, "demo needs --output DIR");
    fs::create_directories(c.output);
    const fs::path dir(c.output);

    if (c.demo_name == "three-rings")
    {
        const std::size_t k = c.k ? c.k : 3;
        const auto r = hp::analyze_three_rings(c.sensors, c.seed, k);
        const auto& X = r.geometry.weighted.complex();
        hp::io::write_file((dir / "points.csv").string(), hp::io::points_to_csv(r.geometry.points));
        hp::io::write_file((dir / "complex.json").string(), hp::io::complex_to_json(X).dump() + "\n");
        Json j = spectrum_report(r.geometry.weighted, 1, 10, c.zero_tol, false);
        Json low = Json::array();
        for (std::size_t i = 0; i < r.low.size(); ++i)
            low.push_back({{"lambda", r.low[i].value}, {"ring", r.ring[i]}, {"mass_inside", r.mass[i]}});
        j["low_modes"] = low;
        j["next_eigenvalue"] = r.next;
        hp::io::write_file((dir / "spectrum.json").string(), j.dump(2) + "\n");
        for (std::size_t i = 0; i < r.low.size(); ++i)
            hp::io::write_file((dir / ("eigenvector_" + std::to_string(i + 1) + ".csv")).string(),
                               edge_coloring_csv(X, r.low[i].vector));
        return kOk;
    }
    if (c.demo_name == "annulus")
    {
        const auto inst = hp::annulus_disc_instance(6, 1e-2);
        const auto U = hp::weighted_union(inst.outer, inst.filler);
        const auto r = hp::verify_eigenvalue_bound(inst);
        hp::io::write_file((dir / "points.csv").string(), hp::io::points_to_csv(inst.layout));
        hp::io::write_file((dir / "complex.json").string(), hp::io::weighted_to_json(U).dump() + "\n");
        Json j = spectrum_report(U, 1, 10, c.zero_tol, false);
        j["lambda"] = r.lambda;
        j["bound"] = r.bound;
        j["holds"] = r.holds;
        hp::io::write_file((dir / "spectrum.json").string(), j.dump(2) + "\n");
        hp::io::write_file((dir / "eigenvector_1.csv").string(), edge_coloring_csv(U.complex(), r.eigenvector));
        return kOk;
    }
    std::cerr << "unknown demo '" << c.demo_name << "' (expected three-rings or annulus)\n";
    return kUsage;
}

}   // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weighted simplicial Laplacians for planar sensor networks"};
    app.require_subcommand(1);
    Config c;

    auto add_io = [&](CLI::App* sub, bool needs_input) {
        auto* in = sub->add_option("--input,-i", c.input, "points file (CSV id,x,y or JSON {\"points\": ...})");
        if (needs_input) in->required();
        sub->add_option("--output,-o", c.output, "output path (stdout if omitted)");
    };
    auto add_run = [&](CLI::App* sub) {
        sub->add_option("--steps", c.steps, "iterations")->capture_default_str();
        sub->add_option("--step-size", c.step_size, "largest point displacement per step")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_flag("--line-search,!--no-line-search", c.line_search, "halve rejected steps")
            ->capture_default_str();
        sub->add_flag("--full-laplacian", c.full_laplacian, "use the full L~_1 instead of its up part");
        sub->add_option("--final", c.final_csv, "final positions CSV (default: OUTPUT with .final.csv)");
    };

    auto* spectrum = app.add_subcommand("spectrum", "smallest eigenvalues of L~_n on the Delaunay complex");
    add_io(spectrum, true);
    spectrum->add_option("--dim", c.dim, "chain dimension n")->capture_default_str();
    spectrum->add_option("--k", c.k, "number of eigenvalues (default 10)")->check(CLI::PositiveNumber);
    spectrum->add_option("--zero-tol", c.zero_tol, "relative zero tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    spectrum->add_flag("--emit-eigenvectors", c.emit_eigenvectors, "include eigenvectors");
    spectrum->add_option("--matrix-market", c.matrix_market, "also write L~_n in MatrixMarket format");

    auto* repair = app.add_subcommand("repair", "gradient ascent on the smallest nonzero eigenvalue");
    add_io(repair, true);
    add_run(repair);

    auto* cage = app.add_subcommand("cage", "gradient descent on the k-th smallest nonzero eigenvalue");
    add_io(cage, true);
    add_run(cage);
    cage->add_option("--k", c.k, "number of almost-holes to create (default 3)")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "check the eigenvalue bound on annulus/disc instances");
    verify->add_option("--output,-o", c.output, "report path (stdout if omitted)");
    verify->add_option("--dim", c.dim, "chain dimension (only 1 is supported)")->capture_default_str();
    verify->add_option("--m", c.cycle_lengths, "glued cycle lengths")->check(CLI::Range(3, 1000));
    verify->add_option("--epsilon", c.epsilons, "filler weights")->check(CLI::PositiveNumber);
    verify->add_flag("--multi", c.multi, "also check one chain of discs with all epsilons");

    auto* demo = app.add_subcommand("demo", "write plot data for a canonical configuration");
    demo->add_option("name", c.demo_name, "three-rings or annulus")->required();
    demo->add_option("--output,-o", c.output, "output directory")->required();
    demo->add_option("--seed", c.seed, "random seed")->capture_default_str();
    demo->add_option("--sensors", c.sensors, "sensor count for three-rings")
        ->check(CLI::Range(30, 100000))
        ->capture_default_str();
    demo->add_option("--k", c.k, "number of eigenvector colorings")->check(CLI::PositiveNumber);
    demo->add_option("--zero-tol", c.zero_tol, "relative zero tolerance")->check(CLI::PositiveNumber);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try
    {
        if (*spectrum) return cmd_spectrum(c);
        if (*repair) return cmd_repair(c);
        if (*cage) return cmd_cage(c);
        if (*verify) return cmd_verify(c);
        if (*demo) return cmd_demo(c);
    }
    catch (const hp::Error& e)
    {
        std::cerr << "error (" << hp::to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e.kind());
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
