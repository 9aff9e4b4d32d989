#include "sepwp/cli.hpp"

#include "sepwp/analysis.hpp"
#include "sepwp/config.hpp"
#include "sepwp/examples.hpp"
#include "sepwp/parallel.hpp"
#include "sepwp/problem.hpp"
#include "sepwp/sequences.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sepwp::cli {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string format_point(std::span<const double> p)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i)
            s += ", ";
        s += format_number(p[i]);
    }
    return s + ")";
}

std::vector<std::string> coordinate_names(const problem::PerturbedSEP& inst)
{
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= inst.dim1(); ++i)
        names.push_back("z" + std::to_string(i));
    for (std::size_t i = 1; i <= inst.dim2(); ++i)
        names.push_back("w" + std::to_string(i));
    return names;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    f << content;
    if (!f)
        throw std::runtime_error("failed writing " + path.string());
}

// ============================================================================
// analyze
// ============================================================================

struct AnalyzeArgs {
    std::string config;
    double eps = 0.0;
    std::string dump;
    std::size_t threads = 0;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out)
{
    if (!(a.eps > 0.0))
        throw UsageError("eps must be positive");
    const ProblemConfig cfg = load_config(a.config);
    const auto& inst = cfg.instance;
    const auto set = analysis::compute_S_eps(inst, cfg.plan, a.eps, a.threads);
    const auto names = coordinate_names(inst);

    out << "eps: " << format_number(a.eps) << '\n';
    out << "count: " << set.members.size() << '\n';
    out << "diam: " << format_number(geometry::diameter(set.members)) << '\n';
    if (!set.members.empty()) {
        for (std::size_t d = 0; d < set.members.dim(); ++d) {
            double lo = set.members[0][d];
            double hi = lo;
            for (std::size_t i = 1; i < set.members.size(); ++i) {
                lo = std::min(lo, set.members[i][d]);
                hi = std::max(hi, set.members[i][d]);
            }
            out << "bbox " << names[d] << ": [" << format_number(lo) << ", " << format_number(hi) << "]\n";
        }
    }

    if (!a.dump.empty()) {
        std::ostringstream csv;
        for (std::size_t d = 0; d < names.size(); ++d)
            csv << (d ? "," : "") << names[d];
        for (std::size_t i = 1; i <= inst.pdim(); ++i)
            csv << ",p" << i;
        csv << '\n';
        for (std::size_t i = 0; i < set.members.size(); ++i) {
            for (std::size_t d = 0; d < set.members.dim(); ++d)
                csv << (d ? "," : "") << format_number(set.members[i][d]);
            for (double v : set.witness_params[i])
                csv << ',' << format_number(v);
            csv << '\n';
        }
        write_file(a.dump, csv.str());
        out << "dump: " << a.dump << '\n';
    }
    return kOk;
}

// ============================================================================
// sweep
// ============================================================================

struct SweepArgs {
    std::string config;
    double eps_start = 0.2;
    double factor = 0.5;
    std::size_t steps = 4;
    std::string out_path;
    std::size_t threads = 0;
    bool timing = false;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out)
{
    if (!(a.eps_start > 0.0))
        throw UsageError("eps-start must be positive");
    if (!(a.factor > 0.0 && a.factor < 1.0))
        throw UsageError("factor must lie strictly between 0 and 1");
    if (a.steps == 0)
        throw UsageError("steps must be positive");
    const ProblemConfig cfg = load_config(a.config);
    const auto schedule = analysis::geometric_schedule(a.eps_start, a.factor, a.steps);
    if (schedule.back() < cfg.plan.eps_floor)
        throw UsageError("schedule ends at " + format_number(schedule.back()) + ", below eps_floor " +
                         format_number(cfg.plan.eps_floor));

    analysis::SweepOptions opt;
    opt.kuratowski_k = cfg.kuratowski_k;
    opt.thresholds = cfg.effective_thresholds();
    opt.threads = a.threads;
    const auto result = analysis::sweep(cfg.instance, cfg.plan, schedule, opt);
    const std::string csv = sweep_csv(result, a.timing);

    if (a.out_path.empty()) {
        out << csv;
    } else {
        write_file(a.out_path, csv);
        out << "wrote " << a.out_path << '\n';
    }
    if (a.timing) {
        for (const auto& r : result.records)
            out << "time eps=" << format_number(r.eps) << ": " << format_number(r.wallclock_ms) << " ms\n";
    }
    out << "classification: " << analysis::to_string(result.classification) << '\n';
    return kOk;
}

// ============================================================================
// verify
// ============================================================================

struct VerifyArgs {
    std::string config;
    std::string sequence;
    std::string mode = "approximating";
    double tol = 1e-9;
    std::size_t threads = 0;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    sequences::Mode mode;
    try {
        mode = sequences::parse_mode(a.mode);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const ProblemConfig cfg = load_config(a.config);
    const auto steps = load_sequence(a.sequence);
    const auto floor = analysis::solution_floor(cfg.instance, cfg.plan, a.threads);

    sequences::VerificationReport rep;
    try {
        rep = sequences::verify(cfg.instance, steps, mode, cfg.plan.h_inner, a.tol, floor.empty() ? nullptr : &floor);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("sequence", e.what());
    }

    double worst[6] = {-INFINITY, -INFINITY, -INFINITY, -INFINITY, -INFINITY, -INFINITY};
    for (const auto& s : rep.steps) {
        const double v[6] = {s.x_in_C, s.y_in_Q, s.link, s.f_tilde, s.g_tilde, s.p_in_M};
        for (int i = 0; i < 6; ++i)
            worst[i] = std::max(worst[i], v[i]);
    }
    static const char* names[6] = {"x_in_C", "y_in_Q", "link", "f_tilde", "g_tilde", "p_in_M"};

    out << "mode: " << sequences::to_string(mode) << '\n';
    out << "steps: " << rep.steps.size() << '\n';
    for (int i = 0; i < 6; ++i)
        out << "worst slack " << names[i] << ": " << format_number(worst[i]) << '\n';
    if (!rep.tail_convergence.empty())
        out << "tail distance to floor set: " << format_number(rep.tail_convergence.back()) << '\n';
    for (const auto& d : rep.diagnostics)
        out << "diagnostic: " << d << '\n';

    if (rep.passed) {
        out << "result: PASS (prefix-consistent with an " << (mode == sequences::Mode::Approximating ? "" : "generalized ")
            << "approximating sequence)\n";
        return kOk;
    }
    const auto violated = rep.violated_conditions();
    out << "result: FAIL\nviolated:";
    for (const auto& v : violated)
        out << ' ' << v;
    out << '\n';
    for (const auto& s : rep.steps) {
        if (!s.violated.empty()) {
            out << "first failing step: n=" << s.n << " (" << s.violated.front() << ")\n";
            break;
        }
    }
    return kFailure;
}

// ============================================================================
// properties
// ============================================================================

struct PropertiesArgs {
    std::string config;
    std::uint64_t seed = 1;
    std::size_t samples = 1000;
    double tol = 1e-9;
};

void print_check(std::ostream& out, const char* name, const problem::CheckResult& r)
{
    out << name << ": " << (r.passed ? "PASS" : "FAIL") << " worst=" << format_number(r.worst);
    if (!r.passed)
        out << " at p=" << format_point(r.witness_p) << " a=" << format_point(r.witness_first)
            << " b=" << format_point(r.witness_second);
    out << '\n';
}

int cmd_properties(const PropertiesArgs& a, std::ostream& out)
{
    if (a.samples == 0)
        throw UsageError("samples must be positive");
    const ProblemConfig cfg = load_config(a.config);
    problem::CheckOptions opt;
    opt.n_samples = a.samples;
    opt.seed = a.seed;
    opt.tol = a.tol;
    const auto rep = problem::property_report(cfg.instance, opt, cfg.plan.h_inner);

    out << "sampled evidence: samples=" << rep.samples_used << " seed=" << rep.seed << '\n';
    print_check(out, "monotone_f", rep.monotone_f);
    print_check(out, "monotone_g", rep.monotone_g);
    print_check(out, "diag_nonneg_f", rep.diag_nonneg_f);
    print_check(out, "diag_nonneg_g", rep.diag_nonneg_g);
    print_check(out, "convex_in_3rd_f", rep.convex_third_f);
    print_check(out, "convex_in_3rd_g", rep.convex_third_g);
    print_check(out, "hemicontinuity_f", rep.hemicontinuity_f);
    print_check(out, "hemicontinuity_g", rep.hemicontinuity_g);
    const auto& m = rep.minty_f;
    out << "minty_f: " << (m.passed ? "PASS" : "FAIL") << " mismatches=" << m.mismatches
        << " primal=" << m.primal_count << " dual=" << m.dual_count << " grid=" << m.grid_size << '\n';
    if (!m.hypotheses_hold)
        out << "warning: " << m.warning << '\n';
    return rep.all_passed() ? kOk : kFailure;
}

// ============================================================================
// example
// ============================================================================

struct ExampleArgs {
    std::string name;
    std::string out_dir = ".";
};

int cmd_example(const ExampleArgs& a, std::ostream& out)
{
    if (!examples::known(a.name))
        throw UsageError("unknown example '" + a.name + "' (expected ex1 or ex2)");
    const fs::path dir(a.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    const fs::path cfg = dir / (a.name + ".json");
    write_file(cfg, examples::config(a.name).dump(2) + "\n");
    out << "wrote " << cfg.string() << '\n';
    const fs::path exp = dir / (a.name + ".expected.json");
    write_file(exp, examples::expected(a.name).dump(2) + "\n");
    out << "wrote " << exp.string() << '\n';
    if (a.name == "ex1") {
        const fs::path seq = dir / "seq-ex1.json";
        write_file(seq, examples::ex1_sequence().dump(2) + "\n");
        out << "wrote " << seq.string() << '\n';
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Levitin-Polyak well-posedness analysis for split equilibrium problems on boxes", "sepwp"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* c_analyze = app.add_subcommand("analyze", "Sample the approximate solution set at one eps");
    c_analyze->add_option("--config", analyze.config, "Problem config (JSON)")->required();
    c_analyze->add_option("--eps", analyze.eps, "Tolerance eps > 0")->required();
    c_analyze->add_option("--dump", analyze.dump, "Write members and witness parameters as CSV");
    c_analyze->add_option("--threads", analyze.threads, "Worker threads (default: SEPWP_THREADS or all cores)");

    SweepArgs sweep;
    auto* c_sweep = app.add_subcommand("sweep", "Sweep eps -> 0 and classify well-posedness");
    c_sweep->add_option("--config", sweep.config, "Problem config (JSON)")->required();
    c_sweep->add_option("--eps-start", sweep.eps_start, "Largest eps")->capture_default_str();
    c_sweep->add_option("--factor", sweep.factor, "Ratio between consecutive eps")->capture_default_str();
    c_sweep->add_option("--steps", sweep.steps, "Number of eps values")->capture_default_str();
    c_sweep->add_option("--out", sweep.out_path, "CSV output path (stdout when omitted)");
    c_sweep->add_option("--threads", sweep.threads, "Worker threads (default: SEPWP_THREADS or all cores)");
    c_sweep->add_flag("--timing", sweep.timing, "Record wall-clock times in the CSV");

    VerifyArgs verify;
    auto* c_verify = app.add_subcommand("verify", "Check a sequence file against the approximating-sequence conditions");
    c_verify->add_option("--config", verify.config, "Problem config (JSON)")->required();
    c_verify->add_option("--sequence", verify.sequence, "Sequence file (JSON array of steps)")->required();
    c_verify->add_option("--mode", verify.mode, "approximating | generalized")->capture_default_str();
    c_verify->add_option("--tol", verify.tol, "Slack allowed on every condition")->capture_default_str();
    c_verify->add_option("--threads", verify.threads, "Worker threads (default: SEPWP_THREADS or all cores)");

    PropertiesArgs props;
    auto* c_props = app.add_subcommand("properties", "Sampled checks of monotonicity, convexity, hemicontinuity");
    c_props->add_option("--config", props.config, "Problem config (JSON)")->required();
    c_props->add_option("--seed", props.seed, "RNG seed")->capture_default_str();
    c_props->add_option("--samples", props.samples, "Samples per check")->capture_default_str();
    c_props->add_option("--tol", props.tol, "Tolerance of every check")->capture_default_str();

    ExampleArgs example;
    auto* c_example = app.add_subcommand("example", "Write a bundled example config and its expected diagnostics");
    c_example->add_option("name", example.name, "ex1 | ex2")->required();
    c_example->add_option("out_dir", example.out_dir, "Output directory")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (*c_analyze)
            return cmd_analyze(analyze, out);
        if (*c_sweep)
            return cmd_sweep(sweep, out);
        if (*c_verify)
            return cmd_verify(verify, out);
        if (*c_props)
            return cmd_properties(props, out);
        if (*c_example)
            return cmd_example(example, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace sepwp::cli
