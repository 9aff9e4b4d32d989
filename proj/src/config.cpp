#include "sepwp/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sepwp::cli {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path))
{
}

namespace {

std::string join(const std::string& base, const std::string& key)
{
    return base.empty() ? key : base + "." + key;
}

std::string index(const std::string& base, std::size_t i)
{
    return base + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& base, const std::string& key)
{
    if (!obj.is_object())
        throw ConfigError(base, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError(join(base, key), "missing required key");
    return *it;
}

double as_real(const json& v, const std::string& path)
{
    if (!v.is_number())
        throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
        throw ConfigError(path, "must be finite");
    return d;
}

double as_positive(const json& v, const std::string& path)
{
    const double d = as_real(v, path);
    if (!(d > 0.0))
        throw ConfigError(path, "must be positive");
    return d;
}

std::size_t as_count(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || v.get<long long>() <= 0)
        throw ConfigError(path, "expected a positive integer");
    return static_cast<std::size_t>(v.get<long long>());
}

std::vector<double> as_vector(const json& v, const std::string& path, std::size_t expect)
{
    if (!v.is_array())
        throw ConfigError(path, "expected an array");
    if (v.size() != expect)
        throw ConfigError(path, "expected " + std::to_string(expect) + " entries, got " + std::to_string(v.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(as_real(v[i], index(path, i)));
    return out;
}

geometry::Box as_box(const json& v, const std::string& path, std::size_t dim)
{
    if (!v.is_array() || v.size() != dim)
        throw ConfigError(path, "expected " + std::to_string(dim) + " [lower, upper] pairs");
    std::vector<double> lo, hi;
    for (std::size_t i = 0; i < dim; ++i) {
        const auto pair = as_vector(v[i], index(path, i), 2);
        if (pair[0] > pair[1])
            throw ConfigError(index(path, i), "lower bound exceeds upper bound");
        lo.push_back(pair[0]);
        hi.push_back(pair[1]);
    }
    return geometry::Box(std::move(lo), std::move(hi));
}

expr::Expression as_expression(const json& v, const std::string& path)
{
    if (!v.is_string())
        throw ConfigError(path, "expected an expression string");
    try {
        return expr::parse(v.get<std::string>());
    } catch (const expr::ParseError& e) {
        throw ConfigError(path, e.what());
    }
}

json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "malformed JSON in " + path.string() + ": " + e.what());
    }
}

} // namespace

ProblemConfig parse_config(const json& doc)
{
    if (!doc.is_object())
        throw ConfigError("", "config must be a JSON object");
    const std::size_t dim1 = as_count(require(doc, "", "dim1"), "dim1");
    const std::size_t dim2 = as_count(require(doc, "", "dim2"), "dim2");
    const std::size_t pdim = as_count(require(doc, "", "pdim"), "pdim");

    auto c = as_box(require(doc, "", "C"), "C", dim1);
    auto q = as_box(require(doc, "", "Q"), "Q", dim2);

    const json& a = require(doc, "", "A");
    if (!a.is_array() || a.size() != dim2)
        throw ConfigError("A", "expected " + std::to_string(dim2) + " rows of length " + std::to_string(dim1));
    std::vector<double> entries;
    for (std::size_t r = 0; r < dim2; ++r) {
        const auto row = as_vector(a[r], index("A", r), dim1);
        entries.insert(entries.end(), row.begin(), row.end());
    }

    auto f = as_expression(require(doc, "", "f_tilde"), "f_tilde");
    auto g = as_expression(require(doc, "", "g_tilde"), "g_tilde");
    auto p_star = as_vector(require(doc, "", "p_star"), "p_star", pdim);
    const double radius = as_positive(require(doc, "", "m_radius"), "m_radius");

    const json& plan_doc = require(doc, "", "plan");
    analysis::SamplingPlan plan;
    plan.h_candidate = as_positive(require(plan_doc, "plan", "h_candidate"), "plan.h_candidate");
    plan.h_inner = as_positive(require(plan_doc, "plan", "h_inner"), "plan.h_inner");
    plan.h_param = as_positive(require(plan_doc, "plan", "h_param"), "plan.h_param");
    plan.eps_floor = as_positive(require(plan_doc, "plan", "eps_floor"), "plan.eps_floor");

    std::size_t k = 2;
    if (auto it = doc.find("kuratowski_k"); it != doc.end())
        k = as_count(*it, "kuratowski_k");

    std::optional<analysis::Thresholds> thresholds;
    if (auto it = doc.find("thresholds"); it != doc.end()) {
        if (!it->is_object())
            throw ConfigError("thresholds", "expected an object");
        auto th = analysis::Thresholds::defaults(plan);
        if (auto t = it->find("tau_point"); t != it->end())
            th.tau_point = as_positive(*t, "thresholds.tau_point");
        if (auto t = it->find("tau_cluster"); t != it->end())
            th.tau_cluster = as_positive(*t, "thresholds.tau_cluster");
        thresholds = th;
    }

    try {
        problem::PerturbedSEP inst(dim1, dim2, pdim, std::move(c), std::move(q),
                                   geometry::LinearOperator(dim2, dim1, std::move(entries)), std::move(f),
                                   std::move(g), std::move(p_star), radius);
        return ProblemConfig{std::move(inst), plan, k, thresholds};
    } catch (const std::invalid_argument& e) {
        throw ConfigError("", e.what());
    }
}

ProblemConfig load_config(const std::filesystem::path& path)
{
    return parse_config(read_json(path));
}

std::vector<sequences::SequenceStep> parse_sequence(const json& doc)
{
    if (!doc.is_array())
        throw ConfigError("", "sequence file must be a JSON array of steps");
    std::vector<sequences::SequenceStep> out;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string base = index("", i);
        const json& s = doc[i];
        if (!s.is_object())
            throw ConfigError(base, "expected an object");
        sequences::SequenceStep step;
        const json& n = require(s, base, "n");
        if (!n.is_number_integer() || n.get<long long>() < 0)
            throw ConfigError(join(base, "n"), "expected a nonnegative integer");
        step.n = static_cast<std::size_t>(n.get<long long>());
        for (auto [key, dst] : {std::pair{"p", &step.p}, std::pair{"x", &step.x}, std::pair{"y", &step.y}}) {
            const json& v = require(s, base, key);
            *dst = as_vector(v, join(base, key), v.is_array() ? v.size() : 0);
        }
        step.eps = as_positive(require(s, base, "eps"), join(base, "eps"));
        out.push_back(std::move(step));
    }
    return out;
}

std::vector<sequences::SequenceStep> load_sequence(const std::filesystem::path& path)
{
    return parse_sequence(read_json(path));
}

json sequence_to_json(const std::vector<sequences::SequenceStep>& steps)
{
    json out = json::array();
    for (const auto& s : steps)
        out.push_back({{"n", s.n}, {"p", s.p}, {"x", s.x}, {"y", s.y}, {"eps", s.eps}});
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string sweep_csv(const analysis::SweepResult& result, bool include_timing)
{
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (const auto& r : result.records) {
        out << format_number(r.eps) << ',' << r.count << ',' << opt(r.diam) << ',' << opt(r.hausdorff_to_floor)
            << ',' << opt(r.mu_hat) << ',' << format_number(include_timing ? r.wallclock_ms : 0.0) << '\n';
    }
    return out.str();
}

} // namespace sepwp::cli
