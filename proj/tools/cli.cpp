#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "jointsup/asymptotics.hpp"
#include "jointsup/errors.hpp"
#include "jointsup/exact.hpp"

namespace jointsup::cli {

using nlohmann::ordered_json;

namespace {

constexpr std::size_t kMaxGridPoints = 100000;

bool is_command(std::string_view c) {
    for (auto k : {"exact", "infinite", "classify", "asym", "compare", "simulate", "sweep"}) {
        if (c == k) return true;
    }
    return false;
}

bool is_axis(std::string_view a) {
    for (auto k : {"T", "a1", "a2", "c1", "c2", "b", "N"}) {
        if (a == k) return true;
    }
    return false;
}

// Non-finite values have no JSON spelling; null keeps the column present.
ordered_json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json num(const std::optional<double>& v) { return v ? num(*v) : ordered_json(nullptr); }

double require(const std::optional<double>& v, const char* field) {
    if (!v) throw ValidationError(field, "required by this command");
    return *v;
}

void forbid(bool present, const char* field, const std::string& command) {
    if (present) throw ValidationError(field, "not accepted by " + command);
}

std::vector<double> grid(const SweepRange& r) {
    if (!std::isfinite(r.from)) throw ValidationError("from", "must be finite");
    if (!std::isfinite(r.to)) throw ValidationError("to", "must be finite");
    if (!std::isfinite(r.step) || !(r.step > 0.0)) throw ValidationError("step", "must be > 0");
    if (r.to < r.from) throw ValidationError("to", "must be >= from");
    const double span = (r.to - r.from) / r.step;
    if (!(span < static_cast<double>(kMaxGridPoints))) {
        throw ValidationError("step", "grid exceeds " + std::to_string(kMaxGridPoints) + " points");
    }
    const auto n = static_cast<std::size_t>(std::floor(span * (1.0 + 1e-12) + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = r.from + static_cast<double>(i) * r.step;
    return out;
}

void validate(const RunSpec& s) {
    if (!is_command(s.command)) throw ValidationError("command", "unknown command '" + s.command + "'");
    const std::string& c = s.command;
    normalize(s.params);

    if (c == "infinite") {
        forbid(s.T.has_value(), "T", c);
    } else if (c != "sweep" || !s.range || s.range->axis != "T") {
        validate_horizon(require(s.T, "T"));
    }

    if (c == "asym") {
        if (s.N && s.b) throw ValidationError("b", "give at most one of N and b");
    } else {
        forbid(s.N.has_value(), "N", c);
        forbid(s.b.has_value(), "b", c);
    }

    if (c == "compare" || c == "sweep") {
        if (!s.range) throw ValidationError("from", "required by " + c);
        if (c == "sweep" && !is_axis(s.range->axis)) {
            throw ValidationError("axis", "must be one of T, a1, a2, c1, c2, b, N");
        }
        grid(*s.range);
    } else {
        forbid(s.range.has_value(), "from", c);
    }
}

// Log of the joint probability; the tail-stable path takes over once the
// linear value stops carrying digits.
std::pair<ProbabilityResult, double> joint(const NormalizedParams& q, double T) {
    ProbabilityResult r = pi_joint(q, T);
    double log_p = r.log_p;
    if (r.p < 1e-280) log_p = log_pi_joint(q, T).log_p;
    return {r, log_p};
}

std::optional<double> asym_many_source(const NormalizedParams& q, double T, double N) {
    if (q.degenerate || !(q.c2 > 0.0)) return std::nullopt;
    return eval_asym(many_source_asym(q, T), N).log_p;
}

std::optional<double> asym_high_threshold(const NormalizedParams& base, double T, double b) {
    const double a = base.a1 / base.a2;
    if (base.degenerate || !(base.c2 > 0.0) || !(a > 0.0 && a < 1.0)) return std::nullopt;
    return high_threshold(a, base.c1, base.c2, T, b).log_p;
}

NormalizedParams with_b(const NormalizedParams& base, double b) {
    if (!std::isfinite(b) || !(b > 0.0)) throw ValidationError("b", "must be > 0");
    ModelParams m{1.0, 1.0, base.c1, base.c2, base.a1 / base.a2 * b, b};
    return normalize(m);
}

ordered_json ratio(double exact_log, const std::optional<double>& asym_log) {
    if (!asym_log || !std::isfinite(exact_log) || !std::isfinite(*asym_log)) return nullptr;
    return num(std::exp(exact_log - *asym_log));
}

std::vector<ordered_json> evaluate(const RunSpec& s) {
    const NormalizedParams q = normalize(s.params);
    const std::string& c = s.command;
    std::vector<ordered_json> rows;

    if (c == "exact") {
        const auto [r, log_p] = joint(q, *s.T);
        ordered_json row;
        row["p"] = num(r.p);
        row["log_p"] = num(log_p);
        row["branch"] = std::string(to_string(r.branch));
        for (int i = 0; i < 4; ++i) {
            row["term_" + std::to_string(i)] = r.terms ? num((*r.terms)[i]) : ordered_json(nullptr);
        }
        rows.push_back(row);
    } else if (c == "infinite") {
        const ProbabilityResult r = pi_infinite(q);
        ordered_json row;
        row["p"] = num(r.p);
        row["log_p"] = num(r.log_p);
        row["branch"] = std::string(to_string(r.branch));
        rows.push_back(row);
    } else if (c == "classify") {
        const CriticalTimes ct = critical_times(q);
        ordered_json row;
        row["case"] = q.c2 > 0.0 ? ordered_json(std::string(to_string(many_source_classify(q, *s.T))))
                                 : ordered_json(nullptr);
        row["branch"] = std::string(to_string(ct.t_star >= *s.T ? Branch::dim_reduced : Branch::full));
        row["t_star"] = num(ct.t_star);
        row["t1"] = num(ct.t1);
        row["t2"] = num(ct.t2);
        row["t_tilde"] = num(ct.t_tilde);
        rows.push_back(row);
    } else if (c == "asym") {
        ordered_json row;
        std::optional<double> asym_log;
        double exact_log = std::numeric_limits<double>::quiet_NaN();
        if (s.b) {
            const auto h = asym_high_threshold(q, *s.T, *s.b);
            if (!h) throw ValidationError("b", "high-threshold asymptotics need c1 > c2 > 0 and a1 < a2");
            row["regime"] = "high_threshold";
            row["prefactor"] = nullptr;
            row["power"] = nullptr;
            row["rate"] = nullptr;
            row["kind"] = "equivalence";
            asym_log = h;
            exact_log = log_pi_joint(with_b(q, *s.b), *s.T).log_p;
        } else {
            const AsymptoticForm f = many_source_asym(q, *s.T);
            row["regime"] = std::string(to_string(many_source_classify(q, *s.T)));
            row["prefactor"] = num(f.prefactor);
            row["power"] = num(f.power);
            row["rate"] = num(f.rate);
            row["kind"] = std::string(to_string(f.kind));
            if (s.N) {
                asym_log = eval_asym(f, *s.N).log_p;
                exact_log = log_many_source(q, *s.T, *s.N).log_p;
            }
        }
        row["asym_log_p"] = num(asym_log);
        row["exact_log_p"] = num(exact_log);
        row["ratio"] = ratio(exact_log, asym_log);
        rows.push_back(row);
    } else if (c == "compare") {
        const AsymptoticForm f = many_source_asym(q, *s.T);
        for (double N : grid(*s.range)) {
            const double exact_log = log_many_source(q, *s.T, N).log_p;
            const double asym_log = eval_asym(f, N).log_p;
            ordered_json row;
            row["N"] = num(N);
            row["exact_log_p"] = num(exact_log);
            row["asym_log_p"] = num(asym_log);
            row["ratio"] = ratio(exact_log, asym_log);
            rows.push_back(row);
        }
    } else if (c == "simulate") {
        const SimEstimate e = simulate_joint(q, *s.T, s.sim);
        const double exact = pi_joint(q, *s.T).p;
        ordered_json row;
        row["p_hat"] = num(e.p_hat);
        row["std_err"] = num(e.std_err);
        row["paths"] = e.paths;
        row["steps"] = e.steps;
        row["seed"] = s.sim.seed;
        row["bridge_correction"] = s.sim.bridge_correction;
        row["exact_p"] = num(exact);
        row["z"] = e.std_err > 0.0 ? num((e.p_hat - exact) / e.std_err) : ordered_json(nullptr);
        rows.push_back(row);
    } else {
        const std::string& axis = s.range->axis;
        for (double v : grid(*s.range)) {
            ordered_json row;
            row["axis"] = axis;
            row["value"] = num(v);
            std::optional<double> asym_log;
            double log_p = 0.0;
            if (axis == "N") {
                log_p = log_many_source(q, *s.T, v).log_p;
                asym_log = asym_many_source(q, *s.T, v);
                row["p"] = nullptr;
                row["log_p"] = num(log_p);
                row["branch"] = nullptr;
            } else {
                NormalizedParams point;
                double T = s.T.value_or(0.0);
                if (axis == "b") {
                    point = with_b(q, v);
                    asym_log = asym_high_threshold(q, T, v);
                } else {
                    ModelParams m = s.params;
                    if (axis == "T") T = v;
                    if (axis == "a1") m.a1 = v;
                    if (axis == "a2") m.a2 = v;
                    if (axis == "c1") m.c1 = v;
                    if (axis == "c2") m.c2 = v;
                    point = normalize(m);
                }
                const auto [r, lp] = joint(point, T);
                log_p = lp;
                row["p"] = num(r.p);
                row["log_p"] = num(log_p);
                row["branch"] = std::string(to_string(r.branch));
            }
            row["asym_log_p"] = num(asym_log);
            row["ratio"] = ratio(log_p, asym_log);
            rows.push_back(row);
        }
    }
    return rows;
}

std::string csv_field(const ordered_json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number()) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
        return buf;
    }
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(key, "is required");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError(key, "has the wrong type");
    }
}

}  // namespace

ordered_json to_json(const RunSpec& s) {
    ordered_json j;
    j["command"] = s.command;
    j["a1"] = s.params.a1;
    j["a2"] = s.params.a2;
    j["c1"] = s.params.c1;
    j["c2"] = s.params.c2;
    j["sigma1"] = s.params.sigma1;
    j["sigma2"] = s.params.sigma2;
    if (s.T) j["T"] = *s.T;
    if (s.N) j["N"] = *s.N;
    if (s.b) j["b"] = *s.b;
    if (s.range) {
        if (s.command == "sweep") j["axis"] = s.range->axis;
        j["from"] = s.range->from;
        j["to"] = s.range->to;
        j["step"] = s.range->step;
    }
    if (s.command == "simulate") {
        j["paths"] = s.sim.paths;
        j["steps"] = s.sim.steps;
        j["seed"] = s.sim.seed;
        j["bridge_correction"] = s.sim.bridge_correction;
    }
    return j;
}

RunSpec from_json(const nlohmann::json& in) {
    const nlohmann::json& j = in.contains("run") ? in.at("run") : in;
    if (!j.is_object()) throw ValidationError("run", "must be a JSON object");
    static const std::vector<std::string> known = {
        "command", "a1", "a2", "c1", "c2", "sigma1", "sigma2", "T", "N", "b",
        "axis", "from", "to", "step", "paths", "steps", "seed", "bridge_correction"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError(key, "unknown field");
        }
    }
    RunSpec s;
    s.command = get_field<std::string>(j, "command");
    const auto number = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = get_field<double>(j, key);
    };
    const auto optional = [&](const char* key, std::optional<double>& dst) {
        if (j.contains(key)) dst = get_field<double>(j, key);
    };
    number("a1", s.params.a1);
    number("a2", s.params.a2);
    number("c1", s.params.c1);
    number("c2", s.params.c2);
    number("sigma1", s.params.sigma1);
    number("sigma2", s.params.sigma2);
    optional("T", s.T);
    optional("N", s.N);
    optional("b", s.b);
    if (j.contains("from") || j.contains("to") || j.contains("step") || j.contains("axis")) {
        SweepRange r;
        if (s.command == "compare") r.axis = "N";
        if (j.contains("axis")) r.axis = get_field<std::string>(j, "axis");
        r.from = get_field<double>(j, "from");
        r.to = get_field<double>(j, "to");
        r.step = get_field<double>(j, "step");
        s.range = r;
    }
    if (j.contains("paths")) s.sim.paths = get_field<std::uint64_t>(j, "paths");
    if (j.contains("steps")) s.sim.steps = get_field<std::uint64_t>(j, "steps");
    if (j.contains("seed")) s.sim.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("bridge_correction")) s.sim.bridge_correction = get_field<bool>(j, "bridge_correction");
    return s;
}

void run(const RunSpec& spec, std::ostream& os) {
    validate(spec);
    const std::vector<ordered_json> rows = evaluate(spec);

    if (spec.format == Format::json) {
        const ordered_json run_obj = to_json(spec);
        for (const ordered_json& row : rows) {
            ordered_json rec;
            rec["command"] = spec.command;
            for (const auto& [k, v] : row.items()) rec[k] = v;
            rec["run"] = run_obj;
            os << rec.dump() << '\n';
        }
        return;
    }

    // Every row of a command has the same keys, so the first one fixes the header.
    std::string line;
    for (const auto& [k, v] : rows.front().items()) line += (line.empty() ? "" : ",") + k;
    os << line << '\n';
    for (const ordered_json& row : rows) {
        line.clear();
        bool first = true;
        for (const auto& [k, v] : row.items()) {
            if (!first) line += ',';
            line += csv_field(v);
            first = false;
        }
        os << line << '\n';
    }
}

namespace {

struct Options {
    ModelParams params;
    std::optional<double> T, N, b, from, to, step;
    std::string axis;
    std::uint64_t paths = SimConfig{}.paths;
    std::uint64_t steps = SimConfig{}.steps;
    std::uint64_t seed = 0;
    bool no_bridge = false;
};

void add_model(CLI::App* sub, Options& o, bool horizon) {
    sub->add_option("--a1", o.params.a1, "threshold of boundary 1");
    sub->add_option("--a2", o.params.a2, "threshold of boundary 2");
    sub->add_option("--c1", o.params.c1, "drift of boundary 1");
    sub->add_option("--c2", o.params.c2, "drift of boundary 2");
    sub->add_option("--sigma1", o.params.sigma1, "volatility of component 1");
    sub->add_option("--sigma2", o.params.sigma2, "volatility of component 2");
    if (horizon) sub->add_option("--T", o.T, "horizon");
}

void add_range(CLI::App* sub, Options& o) {
    sub->add_option("--from", o.from, "first grid value");
    sub->add_option("--to", o.to, "last grid value (inclusive)");
    sub->add_option("--step", o.step, "grid spacing");
}

}  // namespace

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Joint crossing probabilities of two drifted Brownian suprema"};
    app.require_subcommand(0, 1);

    std::string format = "json";
    std::string out_path;
    std::string spec_path;
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", out_path, "write records to this file");
    app.add_option("--spec", spec_path, "replay a run object (or the first JSON record of a previous run)");

    Options o;
    auto* exact = app.add_subcommand("exact", "joint probability on [0, T]");
    add_model(exact, o, true);
    auto* infinite = app.add_subcommand("infinite", "joint probability on [0, inf)");
    add_model(infinite, o, false);
    auto* classify = app.add_subcommand("classify", "critical times and many-source case");
    add_model(classify, o, true);
    auto* asym = app.add_subcommand("asym", "asymptotic form, evaluated at N or b when given");
    add_model(asym, o, true);
    asym->add_option("--N", o.N, "number of sources");
    asym->add_option("--b", o.b, "threshold scale; thresholds become (b a1/a2, b)");
    auto* compare = app.add_subcommand("compare", "exact vs many-source asymptotic over an N grid");
    add_model(compare, o, true);
    add_range(compare, o);
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate against the exact value");
    add_model(simulate, o, true);
    simulate->add_option("--paths", o.paths, "number of paths");
    simulate->add_option("--steps", o.steps, "grid steps per path");
    simulate->add_option("--seed", o.seed, "random seed");
    simulate->add_flag("--no-bridge-correction", o.no_bridge, "count grid crossings only");
    auto* sweep = app.add_subcommand("sweep", "one record per grid point of a parameter");
    add_model(sweep, o, true);
    sweep->add_option("--axis", o.axis, "T, a1, a2, c1, c2, b or N")
        ->check(CLI::IsMember({"T", "a1", "a2", "c1", "c2", "b", "N"}));
    add_range(sweep, o);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        RunSpec spec;
        const auto chosen = app.get_subcommands();
        if (!spec_path.empty()) {
            if (!chosen.empty()) throw ValidationError("spec", "cannot be combined with a command");
            std::ifstream in(spec_path);
            if (!in) throw ValidationError("spec", "cannot read '" + spec_path + "'");
            std::string line;
            while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
            }
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) {
                in.clear();
                in.seekg(0);
                std::stringstream whole;
                whole << in.rdbuf();
                j = nlohmann::json::parse(whole.str(), nullptr, false);
            }
            if (j.is_discarded() || !j.is_object()) throw ValidationError("spec", "not a JSON object");
            spec = from_json(j);
        } else {
            if (chosen.empty()) throw ValidationError("command", "a command is required (see --help)");
            spec.command = chosen.front()->get_name();
            spec.params = o.params;
            spec.T = o.T;
            spec.N = o.N;
            spec.b = o.b;
            if (o.from || o.to || o.step) {
                SweepRange r;
                r.axis = spec.command == "compare" ? "N" : o.axis;
                r.from = require(o.from, "from");
                r.to = require(o.to, "to");
                r.step = require(o.step, "step");
                spec.range = r;
            } else if (!o.axis.empty()) {
                require(o.from, "from");
            }
            spec.sim.paths = o.paths;
            spec.sim.steps = o.steps;
            spec.sim.seed = o.seed;
            spec.sim.bridge_correction = !o.no_bridge;
        }
        spec.format = format == "csv" ? Format::csv : Format::json;
        spec.out = out_path;

        if (spec.out.empty()) {
            run(spec, out);
        } else {
            // Records are complete before the file is touched.
            std::ostringstream buf;
            run(spec, buf);
            std::ofstream file(spec.out, std::ios::binary);
            if (!file) throw ValidationError("out", "cannot open '" + spec.out + "'");
            file << buf.str();
        }
        return kExitOk;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalIntegrityError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitIntegrity;
    }
}

}  // namespace jointsup::cli
