#include "helmspec/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "helmspec/asymptotics.hpp"
#include "helmspec/drum2d.hpp"
#include "helmspec/errors.hpp"
#include "helmspec/experiments.hpp"
#include "helmspec/format.hpp"
#include "helmspec/selftest.hpp"
#include "helmspec/solvers.hpp"

namespace helmspec::cli {

namespace {

using Cell = std::variant<std::string, double, long>;

struct Output {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> notes;  // trailing comment lines, never containing '='
};

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorCode::ConfigError, msg); }

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

std::string csv_field(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

void emit(const RunConfig& cfg, const Output& o, std::ostream& os) {
    os << "# helmspec\n";
    for (const auto& [k, v] : cfg.resolved) os << "# " << k << '=' << v << '\n';
    if (cfg.format == OutputFormat::Csv) {
        for (std::size_t i = 0; i < o.columns.size(); ++i) os << (i ? "," : "") << o.columns[i];
        os << '\n';
        for (const auto& row : o.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
            os << '\n';
        }
    } else {
        for (const auto& row : o.rows) {
            nlohmann::ordered_json j;
            for (std::size_t i = 0; i < row.size(); ++i)
                std::visit([&](const auto& v) { j[o.columns[i]] = v; }, row[i]);
            os << j.dump() << '\n';
        }
    }
    for (const auto& n : o.notes) os << "# " << n << '\n';
}

template <class E>
E parse_enum(const std::string& key, const std::string& text, std::initializer_list<std::pair<const char*, E>> table) {
    for (const auto& [name, value] : table)
        if (text == name) return value;
    config_error("invalid value for " + key + ": " + text);
}

const char* command_name(Command c) {
    switch (c) {
        case Command::Solve: return "solve";
        case Command::Table1: return "table1";
        case Command::Drum2d: return "drum2d";
        case Command::Sweep: return "sweep";
        case Command::SelfTest: return "selftest";
    }
    return "";
}

const char* method_name(Method m) {
    switch (m) {
        case Method::Power: return "power";
        case Method::Lanczos: return "lanczos";
        case Method::Block: return "block";
        case Method::Rr: return "rr";
    }
    return "";
}

int env_threads() {
    const int hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("HH_THREADS");
    if (!env || !*env) return hw;
    long v = 0;
    try {
        v = parse_int(env);
    } catch (const Error&) {
        config_error("HH_THREADS must be a positive integer");
    }
    if (v < 1) config_error("HH_THREADS must be a positive integer");
    return static_cast<int>(std::min<long>(v, hw));
}

// ---- commands ----

GridFunction default_ansatz(const RunConfig& cfg, const ContextPtr& ctx, const Mode& m, int index) {
    if (index == 0 && !ctx->is_2d()) {
        if (const auto* p = cfg.density.as<DensitySpec::Parabolic>()) {
            if (cfg.bc == BoundaryCondition::DD) return ansatz_parabolic_dd(ctx, p->alpha);
            if (has_zero_mode(cfg.bc)) return ansatz_parabolic_nn(ctx);
        }
    }
    return ansatz_mode(ctx, m);
}

bool solve(const RunConfig& cfg, Output& o) {
    const Domain domain = cfg.b ? Domain::rectangle(cfg.a, *cfg.b) : Domain::interval(cfg.a);
    QuadratureOptions q;
    q.nodes_per_panel = cfg.nodes_per_panel;
    q.nx_max = cfg.nx_max;
    const auto ctx = OperatorContext::create(domain, cfg.bc, cfg.density, q);
    IterationOptions it;
    it.p_max = cfg.p_max;
    it.tol = cfg.tol;

    if (cfg.method == Method::Rr) {
        const MatrixEngine engine = (!ctx->is_2d() && has_zero_mode(cfg.bc)) ? MatrixEngine::WInvDeflated : MatrixEngine::WInv;
        const auto pairs = rr_matrix_solve(*ctx, cfg.basis, engine, cfg.states);
        o.columns = {"n", "eigenvalue"};
        for (std::size_t i = 0; i < pairs.size(); ++i) o.rows.push_back({static_cast<long>(i + 1), pairs[i].eigenvalue});
        return true;
    }

    const std::vector<Mode> modes =
        ctx->is_2d() ? lowest_product_modes(domain, cfg.states) : lowest_modes(cfg.bc, domain, cfg.states);
    const auto add_report = [&](const SolveReport& r, std::optional<long> member) {
        for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
            std::vector<Cell> row;
            if (member) row.push_back(*member);
            row.push_back(static_cast<long>(i + 1));
            row.push_back(r.eigenvalues[i]);
            row.push_back(r.msd[i]);
            o.rows.push_back(std::move(row));
        }
    };

    if (cfg.method == Method::Block) {
        o.columns = {"member", "p", "eigenvalue", "msd"};
        std::vector<GridFunction> ans;
        for (int j = 0; j < cfg.states; ++j) ans.push_back(default_ansatz(cfg, ctx, modes[j], j));
        try {
            const auto reps = block_iterate(ans, it);
            for (std::size_t j = 0; j < reps.size(); ++j) add_report(reps[j], static_cast<long>(j + 1));
            o.notes.push_back("status " + reps.front().status);
            return reps.front().converged;
        } catch (const BlockFailure& e) {
            for (std::size_t j = 0; j < e.partial().size(); ++j) add_report(e.partial()[j], static_cast<long>(j + 1));
            o.notes.push_back(std::string("status ") + std::string(to_string(e.code())) + ": " + e.what());
            return false;
        }
    }

    o.columns = {"p", "eigenvalue", "msd"};
    const GridFunction ansatz = default_ansatz(cfg, ctx, modes.front(), 0);
    const SolveReport rep = cfg.method == Method::Power ? power_iterate(ansatz, it) : lanczos_iterate(ansatz, it);
    add_report(rep, std::nullopt);
    o.notes.push_back("status " + rep.status);
    return rep.converged;
}

bool table1(const RunConfig& cfg, Output& o) {
    std::vector<Table1Column> cols;
    for (double alpha : cfg.alphas) cols.push_back(table1_column(alpha, cfg.p_max, 3, cfg.nodes_per_panel));
    o.columns = {"row"};
    for (const auto& c : cols) o.columns.push_back("alpha_" + format_double(c.alpha));

    const auto add_rows = [&](const std::string& prefix, std::size_t count, const auto& value_at) {
        for (std::size_t i = 0; i < count; ++i) {
            std::vector<Cell> row{prefix + std::to_string(i + 1)};
            for (std::size_t c = 0; c < cols.size(); ++c) row.push_back(value_at(c, i));
            o.rows.push_back(std::move(row));
        }
    };
    const std::size_t p = cols.front().rayleigh.size();
    add_rows("O_", p, [&](std::size_t c, std::size_t i) { return cols[c].rayleigh[i]; });
    add_rows("msd_", p, [&](std::size_t c, std::size_t i) { return cols[c].msd[i]; });
    const std::size_t levels = cols.front().shanks.levels.size();
    for (std::size_t k = 0; k < levels; ++k) {
        const std::string prefix = "s" + std::to_string(k + 1) + "_";
        add_rows(prefix, cols.front().shanks.levels[k].size(),
                 [&](std::size_t c, std::size_t i) { return cols[c].shanks.levels[k][i].value; });
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t i = 0; i < cols[c].shanks.levels[k].size(); ++i)
                if (!cols[c].shanks.levels[k][i].valid)
                    o.notes.push_back("invalid " + prefix + std::to_string(i + 1) + " " + o.columns[c + 1] +
                                      " holds the untransformed fallback");
    }
    return true;
}

bool drum2d(const RunConfig& cfg, Output& o) {
    const double b = cfg.b.value_or(0.5);
    o.columns = {"alpha", "bound0_beta0", "bound0_betastar", "bound1_beta0", "bound1_betastar", "rr_reference"};
    for (double alpha : cfg.alphas) {
        const double bs = beta_star(cfg.a, b, alpha);
        o.rows.push_back({alpha, bound0(cfg.a, b, alpha, cfg.beta), bound0(cfg.a, b, alpha, bs),
                          bound1(cfg.a, b, alpha, cfg.beta, cfg.nx_max).value, bound1(cfg.a, b, alpha, bs, cfg.nx_max).value,
                          drum_rr_reference(cfg.a, b, alpha, cfg.basis, 0).eigenvalue});
    }
    return true;
}

bool sweep(const RunConfig& cfg, Output& o) {
    o.columns = {"bc", "eta", "phi", "epsilon", "n", "E_numeric", "E_asymptotic", "residual", "msd_asymptotic"};
    for (double eta : cfg.etas) {
        SweepConfig sc;
        sc.bc = cfg.bc;
        sc.eta = eta;
        sc.epsilons = cfg.epsilons;
        sc.phis = cfg.phis;
        sc.states = cfg.states;
        sc.basis = cfg.basis;
        sc.threads = cfg.threads;
        for (const auto& r : sweep_epsilon(sc))
            o.rows.push_back({std::string(to_string(r.bc)), r.eta, r.phi, r.epsilon, static_cast<long>(r.n), r.e_numeric,
                              r.e_asymptotic, r.residual, r.msd_asymptotic});
    }
    return true;
}

bool selftest(Output& o) {
    auto results = run_selftest();
    {
        std::ostringstream so, se;
        const char* argv[] = {"helmspec", "solve", "--bc", "dd", "--density", "constant:1", "--method", "power"};
        const int status = run(8, argv, so, se);
        double e = 0.0;
        std::istringstream lines(so.str());
        std::string line, last;
        while (std::getline(lines, line))
            if (!line.empty() && line[0] != '#') last = line;
        bool ok = status == 0;
        try {
            const auto parts = parse_double_list(last);
            e = parts.at(1);
            ok = ok && std::abs(e - std::numbers::pi * std::numbers::pi) <= 1e-10;
        } catch (const std::exception&) {
            ok = false;
        }
        results.push_back({"cli solve on the unit string", ok, "got " + format_double(e)});
    }
    o.columns = {"name", "passed", "detail"};
    bool all = true;
    for (const auto& r : results) {
        o.rows.push_back({r.name, static_cast<long>(r.passed), r.detail});
        all = all && r.passed;
    }
    return all;
}

bool is_config_code(ErrorCode c) {
    switch (c) {
        case ErrorCode::NoConvergence:
        case ErrorCode::RankCollapse:
        case ErrorCode::LostOverlap:
        case ErrorCode::DegenerateSubspace:
        case ErrorCode::TooShort:
            return false;
        default:
            return true;
    }
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{"command", "bc",     "density", "method",      "pmax",
                                               "tol",     "basis",  "states",  "alpha",       "beta",
                                               "eta",     "phi",    "epsilon-grid", "nodes-per-panel", "nx-max",
                                               "a",       "b",      "out",     "format"};
    return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (!s.empty() && s[0] == '#') s = trim(std::string_view(s).substr(1));
        const auto eq = s.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(std::string_view(s).substr(0, eq));
        const std::string value = trim(std::string_view(s).substr(eq + 1));
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            config_error("unknown config key '" + key + "' on line " + std::to_string(lineno));
        out[key] = value;
    }
    return out;
}

RunConfig resolve_config(const std::map<std::string, std::string>& values) {
    RunConfig c;
    const auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = values.find(k);
        if (it == values.end()) return std::nullopt;
        return it->second;
    };
    const auto get_int = [&](const std::string& k, int def, int lo, int hi) {
        const auto v = get(k);
        if (!v) return def;
        const long x = parse_int(*v);
        if (x < lo || x > hi)
            config_error(k + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        return static_cast<int>(x);
    };
    const auto get_positive = [&](const std::string& k, double def) {
        const auto v = get(k);
        if (!v) return def;
        const double x = parse_double(*v);
        if (!(x > 0.0 && std::isfinite(x))) config_error(k + " must be positive");
        return x;
    };
    const auto get_list = [&](const std::string& k, std::vector<double> def) {
        const auto v = get(k);
        if (!v) return def;
        auto x = parse_double_list(*v);
        if (x.empty()) config_error(k + " must not be empty");
        for (double d : x)
            if (!std::isfinite(d)) config_error(k + " entries must be finite");
        return x;
    };
    const auto put = [&](const std::string& k, const std::string& v) { c.resolved.emplace_back(k, v); };

    const auto cmd = get("command");
    if (!cmd) config_error("missing command (solve|table1|drum2d|sweep|selftest)");
    c.command = parse_enum<Command>("command", *cmd,
                                    {{"solve", Command::Solve}, {"table1", Command::Table1}, {"drum2d", Command::Drum2d},
                                     {"sweep", Command::Sweep}, {"selftest", Command::SelfTest}});
    put("command", command_name(c.command));
    c.format = parse_enum<OutputFormat>("format", get("format").value_or("csv"),
                                        {{"csv", OutputFormat::Csv}, {"json-lines", OutputFormat::JsonLines}});
    put("format", c.format == OutputFormat::Csv ? "csv" : "json-lines");
    c.out = get("out").value_or("");

    switch (c.command) {
        case Command::Solve: {
            c.bc = parse_bc(get("bc").value_or("dd"));
            c.density = parse_density(get("density").value_or("constant:1"));
            c.method = parse_enum<Method>("method", get("method").value_or("power"),
                                          {{"power", Method::Power}, {"lanczos", Method::Lanczos},
                                           {"block", Method::Block}, {"rr", Method::Rr}});
            c.p_max = get_int("pmax", 64, 1, 100000);
            c.tol = get_positive("tol", 1e-12);
            c.basis = get_int("basis", 40, 1, 4000);
            c.states = get_int("states", c.method == Method::Block ? 3 : 1, 1, 1000);
            c.nodes_per_panel = get_int("nodes-per-panel", 12, 1, 64);
            c.nx_max = get_int("nx-max", 80, 2, 4000);
            c.a = get_positive("a", 1.0);
            if (get("b")) c.b = get_positive("b", 0.5);
            const Domain d = c.b ? Domain::rectangle(c.a, *c.b) : Domain::interval(c.a);
            validate_density(c.density, d);
            if (c.b && c.bc != BoundaryCondition::DD) config_error("rectangles support bc dd only");
            if (c.method == Method::Lanczos && has_zero_mode(c.bc) && !c.b)
                config_error("lanczos supports bc dd|nd|dn");
            if (c.method == Method::Rr) {
                const int dim = (has_zero_mode(c.bc) && !c.b) ? c.basis - 1 : c.basis;
                if (c.states > dim) config_error("states must not exceed the rr matrix dimension");
            }
            put("bc", std::string(to_string(c.bc)));
            put("density", c.density.describe());
            put("method", method_name(c.method));
            put("pmax", std::to_string(c.p_max));
            put("tol", format_double(c.tol));
            put("basis", std::to_string(c.basis));
            put("states", std::to_string(c.states));
            put("nodes-per-panel", std::to_string(c.nodes_per_panel));
            put("nx-max", std::to_string(c.nx_max));
            put("a", format_double(c.a));
            if (c.b) put("b", format_double(*c.b));
            break;
        }
        case Command::Table1: {
            c.alphas = get_list("alpha", {0.5, 1.0, 2.0});
            for (double al : c.alphas) validate_density(DensitySpec::parabolic(al), Domain::interval(1.0));
            c.p_max = get_int("pmax", 10, 1, 1000);
            c.nodes_per_panel = get_int("nodes-per-panel", 12, 1, 64);
            put("alpha", join(c.alphas));
            put("pmax", std::to_string(c.p_max));
            put("nodes-per-panel", std::to_string(c.nodes_per_panel));
            break;
        }
        case Command::Drum2d: {
            c.alphas = get_list("alpha", {0.5, 1.0, 1.5, 2.0});
            c.a = get_positive("a", 1.0);
            c.b = get_positive("b", 0.5);
            for (double al : c.alphas) validate_density(DensitySpec::parabolic(al), Domain::rectangle(c.a, *c.b));
            const auto beta = get("beta");
            c.beta = beta ? parse_double(*beta) : 0.0;
            if (!std::isfinite(c.beta)) config_error("beta must be finite");
            c.basis = get_int("basis", 400, 1, 4000);
            c.nx_max = get_int("nx-max", 80, 2, 4000);
            put("alpha", join(c.alphas));
            put("beta", format_double(c.beta));
            put("basis", std::to_string(c.basis));
            put("nx-max", std::to_string(c.nx_max));
            put("a", format_double(c.a));
            put("b", format_double(*c.b));
            break;
        }
        case Command::Sweep: {
            c.bc = parse_bc(get("bc").value_or("dd"));
            c.etas = get_list("eta", {0.0, 0.5, 1.0});
            c.phis = get_list("phi", c.bc == BoundaryCondition::PP ? std::vector<double>{0.0, std::numbers::pi / 2.0}
                                                                    : std::vector<double>{0.0});
            c.epsilons = get_list("epsilon-grid", SweepConfig{}.epsilons);
            for (double e : c.epsilons)
                if (!(e > 0.0 && e <= 1.0)) config_error("epsilon-grid values must lie in (0, 1]");
            c.states = get_int("states", 1, 1, 100);
            c.basis = get_int("basis", 0, 0, 20000);
            SweepConfig probe;
            probe.epsilons = c.epsilons;
            const int basis = c.basis > 0 ? c.basis : default_sweep_basis(probe);
            for (double e : c.epsilons)
                if (basis < 2.0 / e) config_error("basis cannot resolve the density period");
            c.threads = env_threads();
            put("bc", std::string(to_string(c.bc)));
            put("eta", join(c.etas));
            put("phi", join(c.phis));
            put("epsilon-grid", join(c.epsilons));
            put("states", std::to_string(c.states));
            put("basis", std::to_string(c.basis));
            break;
        }
        case Command::SelfTest:
            break;
    }
    return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heterogeneous Helmholtz eigenvalue solver"};
    std::string command;
    std::string config_path;
    app.add_option("command", command, "solve | table1 | drum2d | sweep | selftest");
    app.add_option("--config", config_path, "key=value config file");
    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> flag_opts;
    for (const auto& k : config_keys()) {
        if (k == "command") continue;
        flag_opts.emplace_back(k, app.add_option("--" + k, flag_values[k]));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int status = app.exit(e, out, err);
        return status == 0 ? 0 : 1;
    }

    RunConfig cfg;
    try {
        std::map<std::string, std::string> values;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) config_error("cannot read config file " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            values = parse_config_text(buf.str());
        }
        for (const auto& [k, opt] : flag_opts)
            if (opt->count() > 0) values[k] = flag_values[k];
        if (!command.empty()) values["command"] = command;
        cfg = resolve_config(values);
    } catch (const Error& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    }

    Output o;
    int status = 0;
    try {
        bool ok = true;
        switch (cfg.command) {
            case Command::Solve: ok = solve(cfg, o); break;
            case Command::Table1: ok = table1(cfg, o); break;
            case Command::Drum2d: ok = drum2d(cfg, o); break;
            case Command::Sweep: ok = sweep(cfg, o); break;
            case Command::SelfTest: ok = selftest(o); break;
        }
        status = ok ? 0 : 2;
    } catch (const Error& e) {
        if (is_config_code(e.code())) {
            err << "config error: " << e.what() << '\n';
            return 1;
        }
        o.notes.push_back(std::string("status ") + std::string(to_string(e.code())) + ": " + e.what());
        status = 2;
    }
    for (auto& n : o.notes) std::replace(n.begin(), n.end(), '=', ':');

    if (cfg.out.empty()) {
        emit(cfg, o, out);
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            err << "config error: cannot write " << cfg.out << '\n';
            return 1;
        }
        emit(cfg, o, f);
    }
    if (status == 2)
        err << (cfg.command == Command::SelfTest ? "self-test failures\n" : "numerical failure; partial report written\n");
    return status;
}

}  // namespace helmspec::cli
