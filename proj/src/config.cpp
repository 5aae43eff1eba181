#include "spde/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "spde/basis.hpp"
#include "spde/errors.hpp"
#include "bundled_scenarios.hpp"

namespace spde {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void parse_fail(int line, const std::string& reason) {
    throw ParseError("line " + std::to_string(line) + ": " + reason);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

std::vector<double> parse_list(const Entry& e) {
    if (trim(e.value).empty()) parse_fail(e.line, "empty value");
    std::vector<double> out;
    for (const auto& token : split(e.value, ',')) out.push_back(parse_double(token, e.line));
    return out;
}

std::pair<double, double> parse_range(const Entry& e) {
    const auto parts = split(e.value, ':');
    if (parts.size() != 2) parse_fail(e.line, "expected lo:hi, got '" + e.value + "'");
    return {parse_double(parts[0], e.line), parse_double(parts[1], e.line)};
}

long parse_integer(const Entry& e) {
    const std::string s = trim(e.value);
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        parse_fail(e.line, "expected an integer, got '" + e.value + "'");
    }
    return v;
}

bool parse_bool(const Entry& e) {
    const std::string v = lower(trim(e.value));
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    parse_fail(e.line, "expected true or false, got '" + e.value + "'");
}

TimeFunction parse_time_function(const std::string& raw, int line) {
    const std::string s = lower(trim(raw));
    if (s == "zero" || s == "0") return TimeFunction::zero();
    if (s == "sin") return TimeFunction::sine();
    if (s == "cos") return TimeFunction::cosine();
    if (s.rfind("const:", 0) == 0) return TimeFunction::constant(parse_double(s.substr(6), line));
    if (s.rfind("harmonic:", 0) == 0) {
        const auto parts = split(s.substr(9), ',');
        if (parts.size() != 3 && parts.size() != 4) {
            parse_fail(line, "harmonic needs offset,cos,sin[,omega]");
        }
        Harmonic h{parse_double(parts[0], line), parse_double(parts[1], line),
                   parse_double(parts[2], line), parts.size() == 4 ? parse_double(parts[3], line) : 1.0};
        return TimeFunction::harmonic(h);
    }
    parse_fail(line, "unknown time function '" + raw + "' (zero, sin, cos, const:v, harmonic:...)");
}

std::function<double(double)> parse_profile(const std::string& raw, int line) {
    const std::string s = lower(trim(raw));
    if (s == "1") return [](double) { return 1.0; };
    if (s == "x") return [](double x) { return x; };
    if (s == "x^2") return [](double x) { return x * x; };
    if (s.size() > 1 && s[0] == 'e') {
        const Entry e{s.substr(1), line};
        const long k = parse_integer(e);
        if (k < 1) parse_fail(line, "basis index must be >= 1");
        return [k](double x) { return basis_eval(Basis::Cosine, static_cast<int>(k), x); };
    }
    parse_fail(line, "unknown profile '" + raw + "' (e<k>, 1, x, x^2)");
}

// Terms are split on '+' signs that are not part of an exponent.
std::vector<std::string> split_terms(const std::string& s) {
    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool exponent = i > 0 && (s[i - 1] == 'e' || s[i - 1] == 'E') && i > 1 &&
                              std::isdigit(static_cast<unsigned char>(s[i - 2]));
        if (s[i] == '+' && !exponent) {
            out.push_back(trim(current));
            current.clear();
        } else {
            current += s[i];
        }
    }
    out.push_back(trim(current));
    return out;
}

Forcing parse_forcing(const Entry& e) {
    const std::string s = trim(e.value);
    if (lower(s) == "zero" || s == "0") return Forcing::zero();
    Forcing f;
    for (const auto& term : split_terms(s)) {
        const auto star = term.rfind('*');
        if (star == std::string::npos) parse_fail(e.line, "forcing term '" + term + "' must be <time>*<profile>");
        const std::string profile = trim(term.substr(star + 1));
        f.add(parse_time_function(term.substr(0, star), e.line), parse_profile(profile, e.line),
              lower(profile));
    }
    return f;
}

NoiseSpec parse_noise(const Entry& e, std::optional<int> truncation) {
    const std::string s = lower(trim(e.value));
    const int n = truncation.value_or(10);
    if (s == "reciprocal") return NoiseSpec::reciprocal(n);
    if (s.rfind("single:", 0) == 0) {
        const auto parts = split(s.substr(7), ':');
        if (parts.empty() || parts.size() > 2) parse_fail(e.line, "expected single:m[:q]");
        const long m = parse_integer(Entry{parts[0], e.line});
        const double q = parts.size() == 2 ? parse_double(parts[1], e.line) : 1.0;
        return NoiseSpec::single_mode(static_cast<int>(m), q, truncation.value_or(std::max<int>(n, m)));
    }
    auto values = parse_list(e);
    const int size = static_cast<int>(values.size());
    return NoiseSpec::explicit_list(std::move(values), truncation.value_or(size));
}

std::vector<ModeLaw> parse_initial_modes(const Entry& e) {
    std::vector<ModeLaw> out;
    if (trim(e.value).empty()) return out;
    for (const auto& pair : split(e.value, ',')) {
        const auto parts = split(pair, ':');
        if (parts.size() != 2) parse_fail(e.line, "initial mode '" + pair + "' must be mean:variance");
        out.push_back({parse_double(parts[0], e.line), parse_double(parts[1], e.line)});
    }
    return out;
}

const std::set<std::string>& keys_for(const std::string& section, const std::string& type) {
    static const std::set<std::string> top{"name"};
    static const std::set<std::string> additive{"type", "a", "b", "sigma", "forcing", "g", "h",
                                                "boundary", "gamma", "gamma1", "gamma2", "noise",
                                                "truncation", "initial_modes"};
    static const std::set<std::string> multiplicative{"type", "a", "b", "c", "stratonovich_c", "alpha",
                                                      "epsilon", "m", "q_m", "log_mean",
                                                      "log_variance", "deterministic_initial"};
    static const std::set<std::string> kpz{"type", "theta", "xi", "epsilon", "m", "q_m",
                                           "log_mean", "log_variance", "window"};
    static const std::set<std::string> run{"t", "x", "u_grid", "u_points", "T", "dt", "n_paths",
                                           "n_samples", "seed", "modes", "scheme", "fp_x",
                                           "fp_t_range", "fp_u_range", "fp_du", "fp_dt",
                                           "fp_levels", "fp_points", "ck_times", "ck_w", "ck_mode"};
    static const std::set<std::string> outputs{"density", "fk", "oracle", "residual", "ck"};
    static const std::set<std::string> none;
    if (section.empty()) return top;
    if (section == "run") return run;
    if (section == "outputs") return outputs;
    if (section == "model") {
        if (type == "additive") return additive;
        if (type == "multiplicative") return multiplicative;
        if (type == "kpz") return kpz;
    }
    return none;
}

double get_double(const Section& s, const std::string& key, double fallback) {
    const auto it = s.find(key);
    return it == s.end() ? fallback : parse_double(it->second.value, it->second.line);
}

const Entry* find(const Section& s, const std::string& key) {
    const auto it = s.find(key);
    return it == s.end() ? nullptr : &it->second;
}

AdditiveModel build_additive(const Section& s) {
    AdditiveModel m;
    m.a = get_double(s, "a", 1.0);
    m.b = get_double(s, "b", 0.0);
    m.sigma = get_double(s, "sigma", 1.0);
    if (const Entry* e = find(s, "forcing")) m.forcing = parse_forcing(*e);
    const Entry* g = find(s, "g");
    const Entry* h = find(s, "h");
    const TimeFunction gf = g ? parse_time_function(g->value, g->line) : TimeFunction::zero();
    const TimeFunction hf = h ? parse_time_function(h->value, h->line) : TimeFunction::zero();
    int row = 0;
    if (const Entry* e = find(s, "boundary")) {
        const std::string v = lower(trim(e->value));
        if (v.rfind("row:", 0) == 0) {
            row = static_cast<int>(parse_integer(Entry{v.substr(4), e->line}));
        } else if (v != "main") {
            parse_fail(e->line, "boundary must be main or row:<k>");
        }
    }
    m.boundary = BoundaryCase::table(row, gf, hf, get_double(s, "gamma", 0.0), get_double(s, "gamma1", 0.0),
                                     get_double(s, "gamma2", 0.0));
    std::optional<int> truncation;
    if (const Entry* e = find(s, "truncation")) truncation = static_cast<int>(parse_integer(*e));
    if (const Entry* e = find(s, "noise")) {
        m.noise = parse_noise(*e, truncation);
    } else {
        m.noise = NoiseSpec::reciprocal(truncation.value_or(10));
    }
    if (const Entry* e = find(s, "initial_modes")) m.initial_modes = parse_initial_modes(*e);
    return m;
}

MultiplicativeModel build_multiplicative(const Section& s) {
    MultiplicativeModel m;
    m.a = get_double(s, "a", 1.0);
    m.b = get_double(s, "b", 0.0);
    m.alpha = get_double(s, "alpha", 1.0);
    m.epsilon = get_double(s, "epsilon", 1.0);
    if (const Entry* e = find(s, "m")) m.m = static_cast<int>(parse_integer(*e));
    m.q_m = get_double(s, "q_m", 1.0);
    m.initial.log_mean = get_double(s, "log_mean", 0.0);
    m.initial.log_variance = get_double(s, "log_variance", 0.0);
    if (const Entry* e = find(s, "deterministic_initial")) m.deterministic_initial = parse_bool(*e);
    const Entry* c = find(s, "c");
    const Entry* strat = find(s, "stratonovich_c");
    if (c && strat) parse_fail(strat->line, "give either c or stratonovich_c, not both");
    if (strat) {
        m.c = stratonovich_to_ito(parse_double(strat->value, strat->line), m.epsilon, m.q_m);
    } else {
        m.c = c ? parse_double(c->value, c->line) : 0.0;
    }
    return m;
}

KpzModel build_kpz(const Section& s) {
    KpzModel m;
    m.theta = get_double(s, "theta", 1.0);
    m.xi = get_double(s, "xi", 1.0);
    m.epsilon = get_double(s, "epsilon", 1.0);
    if (const Entry* e = find(s, "m")) m.m = static_cast<int>(parse_integer(*e));
    m.q_m = get_double(s, "q_m", 1.0);
    m.initial.log_mean = get_double(s, "log_mean", 0.0);
    m.initial.log_variance = get_double(s, "log_variance", 0.0);
    if (const Entry* e = find(s, "window")) {
        const auto w = parse_list(*e);
        if (w.size() != 2) parse_fail(e->line, "window needs two values lo, hi");
        m.window = {w[0], w[1]};
    } else {
        const double pad = 1e-3 / m.m;
        m.window = {pad, 1.0 / std::max(m.m, 1) - pad};
    }
    return m;
}

RunSettings build_run(const Section& s) {
    RunSettings r;
    if (const Entry* e = find(s, "t")) r.t = parse_list(*e);
    if (const Entry* e = find(s, "x")) r.x = parse_list(*e);
    if (const Entry* e = find(s, "u_grid")) {
        const std::string v = lower(trim(e->value));
        if (v == "auto") {
            r.u_grid.kind = UGrid::Kind::Auto;
        } else if (v.find(':') != std::string::npos) {
            const auto parts = split(v, ':');
            if (parts.size() != 3) parse_fail(e->line, "u_grid range must be lo:hi:count");
            const double lo = parse_double(parts[0], e->line);
            const double hi = parse_double(parts[1], e->line);
            const long count = parse_integer(Entry{parts[2], e->line});
            if (count < 1) parse_fail(e->line, "u_grid count must be >= 1");
            r.u_grid.kind = UGrid::Kind::Explicit;
            for (long i = 0; i < count; ++i) {
                r.u_grid.values.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
            }
        } else {
            r.u_grid.kind = UGrid::Kind::Explicit;
            r.u_grid.values = parse_list(*e);
        }
    }
    if (const Entry* e = find(s, "u_points")) r.u_points = static_cast<int>(parse_integer(*e));
    r.T = get_double(s, "T", r.T);
    if (const Entry* e = find(s, "dt")) r.dt = parse_double(e->value, e->line);
    if (const Entry* e = find(s, "n_paths")) r.n_paths = static_cast<std::uint64_t>(parse_integer(*e));
    if (const Entry* e = find(s, "n_samples")) r.n_samples = static_cast<std::uint64_t>(parse_integer(*e));
    if (const Entry* e = find(s, "seed")) {
        const long v = parse_integer(*e);
        if (v < 0) parse_fail(e->line, "seed must be non-negative");
        r.seed = static_cast<std::uint64_t>(v);
    }
    if (const Entry* e = find(s, "modes")) r.modes = static_cast<int>(parse_integer(*e));
    if (const Entry* e = find(s, "scheme")) {
        r.scheme = lower(trim(e->value));
        if (r.scheme != "exact" && r.scheme != "euler") parse_fail(e->line, "scheme must be exact or euler");
    }
    if (const Entry* e = find(s, "fp_x")) r.fp_x = parse_double(e->value, e->line);
    if (const Entry* e = find(s, "fp_t_range")) r.fp_t_range = parse_range(*e);
    if (const Entry* e = find(s, "fp_u_range")) {
        if (lower(trim(e->value)) != "auto") r.fp_u_range = parse_range(*e);
    }
    r.fp_du = get_double(s, "fp_du", r.fp_du);
    r.fp_dt = get_double(s, "fp_dt", r.fp_dt);
    if (const Entry* e = find(s, "fp_levels")) r.fp_levels = static_cast<int>(parse_integer(*e));
    if (const Entry* e = find(s, "fp_points")) r.fp_points = static_cast<int>(parse_integer(*e));
    if (const Entry* e = find(s, "ck_times")) r.ck_times = parse_list(*e);
    r.ck_w = get_double(s, "ck_w", r.ck_w);
    if (const Entry* e = find(s, "ck_mode")) r.ck_mode = static_cast<int>(parse_integer(*e));
    return r;
}

void check_run(const RunSettings& r) {
    std::vector<Violation> v;
    const auto finite_list = [&](const std::vector<double>& values, const std::string& field) {
        if (values.empty()) v.push_back({field, "must be non-empty"});
        for (const double d : values) {
            if (!std::isfinite(d)) {
                v.push_back({field, "must be finite"});
                break;
            }
        }
    };
    finite_list(r.t, "run.t");
    finite_list(r.x, "run.x");
    for (const double t : r.t) {
        if (t < 0.0) v.push_back({"run.t", "must be >= 0"});
    }
    for (const double x : r.x) {
        if (x < 0.0 || x > 1.0) v.push_back({"run.x", "must lie in [0, 1]"});
    }
    if (r.u_grid.kind == UGrid::Kind::Explicit) finite_list(r.u_grid.values, "run.u_grid");
    if (r.u_points < 2) v.push_back({"run.u_points", "must be >= 2"});
    if (!(r.T > 0.0) || !std::isfinite(r.T)) v.push_back({"run.T", "must be a positive real"});
    if (r.dt && !(*r.dt > 0.0)) v.push_back({"run.dt", "must be > 0"});
    if (r.n_paths < 2) v.push_back({"run.n_paths", "must be >= 2"});
    if (r.n_samples < 1) v.push_back({"run.n_samples", "must be >= 1"});
    if (r.modes < 1 || r.modes > 10'000) v.push_back({"run.modes", "must lie in [1, 10000]"});
    if (!(r.fp_du > 0.0) || !(r.fp_dt > 0.0)) v.push_back({"run.fp_du/fp_dt", "must be > 0"});
    if (r.fp_levels < 1) v.push_back({"run.fp_levels", "must be >= 1"});
    if (r.ck_times.size() != 3) v.push_back({"run.ck_times", "needs exactly three times s, r, t"});
    if (!v.empty()) throw InvalidParameter(std::move(v));
}

}  // namespace

double parse_double(const std::string& token, int line) {
    const std::string s = trim(token);
    double v = 0.0;
    const char* begin = s.data();
    if (!s.empty() && s[0] == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        parse_fail(line, "expected a decimal number, got '" + token + "'");
    }
    return v;
}

Scenario parse_config(const std::string& text, const std::string& origin) {
    std::map<std::string, Section> sections;
    std::set<std::string> seen_sections;
    std::string current;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool any = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.erase(hash);
        s = trim(s);
        if (s.empty()) continue;
        any = true;
        if (s.front() == '[') {
            if (s.back() != ']') parse_fail(line, "unterminated section header");
            current = lower(trim(s.substr(1, s.size() - 2)));
            if (current != "model" && current != "run" && current != "outputs") {
                throw UnknownKey("[" + current + "] (line " + std::to_string(line) + ")");
            }
            if (!seen_sections.insert(current).second) parse_fail(line, "duplicate section [" + current + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) parse_fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        if (key.empty()) parse_fail(line, "empty key");
        Section& section = sections[current];
        if (section.count(key)) parse_fail(line, "duplicate key '" + key + "'");
        section[key] = Entry{trim(s.substr(eq + 1)), line};
    }
    if (!any) throw ParseError(origin + ": empty configuration");

    const Section& model = sections["model"];
    const Entry* type_entry = find(model, "type");
    if (!type_entry) throw ParseError(origin + ": [model] needs a type (additive, multiplicative, kpz)");
    const std::string type = lower(type_entry->value);
    if (type != "additive" && type != "multiplicative" && type != "kpz") {
        parse_fail(type_entry->line, "unknown model type '" + type_entry->value + "'");
    }
    for (const auto& [name, section] : sections) {
        const auto& allowed = keys_for(name, type);
        for (const auto& [key, entry] : section) {
            if (!allowed.count(key)) {
                const std::string where = name.empty() ? "top level" : "[" + name + "]";
                throw UnknownKey(key + " in " + where + " (line " + std::to_string(entry.line) + ")");
            }
        }
    }

    Scenario scenario;
    if (const Entry* e = find(sections[""], "name")) scenario.name = e->value;
    scenario.run = build_run(sections["run"]);
    for (const auto& [key, entry] : sections["outputs"]) scenario.outputs[key] = entry.value;
    check_run(scenario.run);
    if (type == "additive") {
        scenario.model = build_additive(model);
        if (auto v = check(std::get<AdditiveModel>(scenario.model), scenario.run.T); !v.empty()) {
            throw InvalidParameter(std::move(v));
        }
    } else if (type == "multiplicative") {
        scenario.model = validate(build_multiplicative(model));
    } else {
        scenario.model = validate(build_kpz(model));
    }
    return scenario;
}

Scenario load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path);
}

std::vector<std::string> bundled_scenarios() {
    std::vector<std::string> names;
    for (const auto& s : kBundledScenarios) names.emplace_back(s.name);
    return names;
}

std::optional<std::string> bundled_scenario_text(const std::string& name) {
    for (const auto& s : kBundledScenarios) {
        if (name == s.name) return std::string(s.text);
    }
    return std::nullopt;
}

}  // namespace spde
