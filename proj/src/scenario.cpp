#include "rfdress/scenario.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include "rfdress/bessel.hpp"
#include "rfdress/classical.hpp"
#include "rfdress/dressed.hpp"
#include "rfdress/ramp.hpp"
#include "rfdress/spin.hpp"
#include "rfdress/trajectory.hpp"
#include "rfdress/twoatom.hpp"
#include "rfdress/units.hpp"

namespace rfdress::scenario {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void parse_lines(const std::string& text, std::map<std::string, std::string>& into) {
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
        for (char c : key)
            if (!std::islower(static_cast<unsigned char>(c)) &&
                !std::isdigit(static_cast<unsigned char>(c)) && c != '_')
                throw ConfigError("config key '" + key + "' must be lower_snake_case");
        into[key] = value;  // later assignments override inherited ones
    }
}

struct Quantity {
    double value;
    std::string unit;  // empty if none
};

Quantity split_quantity(const std::string& key, const std::string& raw) {
    const char* begin = raw.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ConfigError("key '" + key + "': cannot parse number from '" + raw + "'");
    std::string unit = trim(std::string(end));
    return {v, unit};
}

double with_unit(const std::string& key, const std::string& raw,
                 const std::vector<std::pair<std::string, double>>& units,
                 const std::string& kind) {
    const Quantity q = split_quantity(key, raw);
    if (q.unit.empty())
        throw ConfigError("key '" + key + "': missing " + kind + " unit in '" + raw + "'");
    for (const auto& [name, factor] : units)
        if (q.unit == name) return q.value * factor;
    std::string expected;
    for (const auto& [name, factor] : units) {
        (void)factor;
        expected += expected.empty() ? name : (", " + name);
    }
    throw ConfigError("key '" + key + "': unknown " + kind + " unit '" + q.unit + "' (expected " +
                      expected + ")");
}

const std::vector<std::pair<std::string, double>>& frequency_units() {
    static const std::vector<std::pair<std::string, double>> u = {
        {"Hz", units::two_pi}, {"kHz", units::two_pi * 1e3}, {"MHz", units::two_pi * 1e6},
        {"rad/s", 1.0}};
    return u;
}
const std::vector<std::pair<std::string, double>>& field_units() {
    static const std::vector<std::pair<std::string, double>> u = {
        {"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}, {"G", 1e-4}, {"mG", 1e-7}};
    return u;
}
const std::vector<std::pair<std::string, double>>& gradient_units() {
    static const std::vector<std::pair<std::string, double>> u = {{"T/m", 1.0}, {"G/cm", 1e-2}};
    return u;
}
const std::vector<std::pair<std::string, double>>& time_units() {
    static const std::vector<std::pair<std::string, double>> u = {
        {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}};
    return u;
}
const std::vector<std::pair<std::string, double>>& length_units() {
    static const std::vector<std::pair<std::string, double>> u = {
        {"m", 1.0}, {"mm", 1e-3}, {"um", 1e-6}, {"a0", codata().a0}};
    return u;
}
const std::vector<std::pair<std::string, double>>& mass_units() {
    static const std::vector<std::pair<std::string, double>> u = {{"kg", 1.0},
                                                                  {"amu", codata().amu}};
    return u;
}

}  // namespace

Config Config::load(const std::filesystem::path& file) {
    Config cfg;
    std::vector<std::filesystem::path> chain;
    std::function<void(const std::filesystem::path&, int)> visit =
        [&](const std::filesystem::path& p, int depth) {
            if (depth > 8) throw ConfigError("inherit chain deeper than 8 files");
            std::ifstream in(p, std::ios::binary);
            if (!in) throw ConfigError("cannot open config file '" + p.string() + "'");
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            std::map<std::string, std::string> own;
            parse_lines(text, own);
            if (auto it = own.find("inherit"); it != own.end()) {
                visit(p.parent_path() / it->second, depth + 1);
                own.erase(it);
            }
            for (auto& [k, v] : own) cfg.values_[k] = v;
        };
    visit(file, 0);
    return cfg;
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    parse_lines(text, cfg.values_);
    if (cfg.values_.count("inherit"))
        throw ConfigError("inherit is not supported for inline configs");
    return cfg;
}

std::string Config::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    accessed_.insert(key);
    return it->second;
}

double Config::number(const std::string& key) const {
    const Quantity q = split_quantity(key, raw(key));
    if (!q.unit.empty())
        throw ConfigError("key '" + key + "': dimensionless value must not carry a unit");
    return q.value;
}
double Config::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}
long Config::integer(const std::string& key) const {
    const double v = number(key);
    if (std::fabs(v - std::round(v)) > 1e-9)
        throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<long>(std::llround(v));
}
long Config::integer_or(const std::string& key, long fallback) const {
    return has(key) ? integer(key) : fallback;
}
std::string Config::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? raw(key) : fallback;
}
double Config::frequency(const std::string& key) const {
    return with_unit(key, raw(key), frequency_units(), "frequency");
}
double Config::frequency_or(const std::string& key, double fallback) const {
    return has(key) ? frequency(key) : fallback;
}
double Config::field(const std::string& key) const {
    return with_unit(key, raw(key), field_units(), "magnetic field");
}
double Config::field_or(const std::string& key, double fallback) const {
    return has(key) ? field(key) : fallback;
}
double Config::gradient_or(const std::string& key, double fallback) const {
    return has(key) ? with_unit(key, raw(key), gradient_units(), "gradient") : fallback;
}
double Config::time(const std::string& key) const {
    return with_unit(key, raw(key), time_units(), "time");
}
double Config::time_or(const std::string& key, double fallback) const {
    return has(key) ? time(key) : fallback;
}
double Config::length_or(const std::string& key, double fallback) const {
    return has(key) ? with_unit(key, raw(key), length_units(), "length") : fallback;
}
double Config::mass_or(const std::string& key, double fallback) const {
    return has(key) ? with_unit(key, raw(key), mass_units(), "mass") : fallback;
}

void Config::ensure_all_consumed() const {
    for (const auto& [k, v] : values_) {
        (void)v;
        if (!accessed_.count(k)) throw ConfigError("unknown key '" + k + "'");
    }
}

std::string csv_string(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += table.header[i];
    }
    out += '\n';
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            std::snprintf(buf, sizeof buf, "%.12g", row[i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Table& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path.string() + "'");
    out << csv_string(table);
}

namespace {

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    jobs = std::min(jobs, n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&, t] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

std::string format_si(double v, const char* unit) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g %s", v, unit);
    return buf;
}

std::vector<double> linspace(double lo, double hi, long n) {
    if (n < 1) throw ConfigError("grid needs at least one point");
    std::vector<double> g(n);
    for (long i = 0; i < n; ++i) g[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    return g;
}

std::vector<double> logspace(double lo, double hi, long n) {
    if (!(lo > 0.0 && hi > lo)) throw ConfigError("logarithmic grid needs 0 < min < max");
    std::vector<double> g(n);
    for (long i = 0; i < n; ++i)
        g[i] = n == 1 ? lo : lo * std::pow(hi / lo, i / (n - 1.0));
    return g;
}

// ---- shared parameter groups -------------------------------------------------

struct AtomParams {
    double j, g_j, mass;
    SpinSystem spin() const { return SpinSystem(j, g_j, mass); }
};

AtomParams parse_atom(const Config& cfg, Report* rep) {
    AtomParams a{};
    a.j = cfg.number_or("spin_j", 3.0);
    a.g_j = cfg.number_or("g_j", 2.0);
    a.mass = cfg.mass_or("mass", 52.0 * codata().amu);
    a.spin();  // validate
    if (rep) {
        rep->values.emplace_back("spin j", format_si(a.j, ""));
        rep->values.emplace_back("g_j", format_si(a.g_j, ""));
        rep->values.emplace_back("mass", format_si(a.mass, "kg"));
    }
    return a;
}

// rf frequency plus static field; b_perp may be given directly or via the
// Larmor frequency it produces.
FieldConfig parse_field(const Config& cfg, const AtomParams& atom, double rabi_omega,
                        Report* rep, double default_bpar = 0.0) {
    const auto c = codata();
    const double rf = cfg.frequency("rf_frequency");
    double bperp = 0.0;
    if (cfg.has("larmor_perp") && cfg.has("b_perp"))
        throw ConfigError("give either b_perp or larmor_perp, not both");
    if (cfg.has("larmor_perp"))
        bperp = cfg.frequency("larmor_perp") * c.hbar / (std::fabs(atom.g_j) * c.mu_b);
    else
        bperp = cfg.field_or("b_perp", 0.0);
    const double bpar = cfg.field_or("b_par", default_bpar);
    const double grad = cfg.gradient_or("gradient", 0.0);
    FieldConfig field(bpar, bperp, rf, rabi_omega, grad);
    if (rep) {
        rep->values.emplace_back("rf angular frequency", format_si(rf, "rad/s"));
        rep->values.emplace_back("b_par", format_si(bpar, "T"));
        rep->values.emplace_back("b_perp", format_si(bperp, "T"));
        rep->values.emplace_back("gradient", format_si(grad, "T/m"));
        rep->values.emplace_back("Larmor (static)",
                                 format_si(field.larmor(atom.g_j) / units::two_pi, "Hz"));
        if (!field.strong_field(atom.g_j)) {
            char buf[128];
            std::snprintf(buf, sizeof buf,
                          "strong-field assumption violated: rf frequency %.4g Hz < 5 x Larmor "
                          "%.4g Hz",
                          rf / units::two_pi, field.larmor(atom.g_j) / units::two_pi);
            rep->warnings.emplace_back(buf);
        }
    }
    return field;
}

double parse_tol(const Config& cfg, const RunOptions& opt, double fallback = 1e-11) {
    double tol = cfg.number_or("tol", fallback);
    if (opt.tol) tol = *opt.tol;
    if (!(tol > 0.0)) throw ConfigError("tol must be positive");
    return tol;
}

std::vector<double> parse_ratio_grid(const Config& cfg, double def_min, double def_max,
                                     long def_points) {
    const double lo = cfg.number_or("ratio_min", def_min);
    const double hi = cfg.number_or("ratio_max", def_max);
    const long n = cfg.integer_or("ratio_points", def_points);
    if (!(hi >= lo)) throw ConfigError("ratio_max must be >= ratio_min");
    return linspace(lo, hi, n);
}

std::string m_label(double m) {
    char buf[24];
    if (std::fabs(m - std::round(m)) < 1e-9)
        std::snprintf(buf, sizeof buf, "%s%d", m < 0 ? "m" : "p",
                      static_cast<int>(std::fabs(std::round(m))));
    else
        std::snprintf(buf, sizeof buf, "%s%dh", m < 0 ? "m" : "p",
                      static_cast<int>(std::fabs(std::round(2 * m))));
    return buf;
}

// ---- scenarios ---------------------------------------------------------------

using ScenarioFn = Table (*)(const Config&, const RunOptions&, Report*);

Table fig1(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const double t_up = cfg.time_or("ramp_up", 1e-3);
    const double tol = parse_tol(cfg, opt);
    const std::vector<double> grid = parse_ratio_grid(cfg, 0.0, 4.3, 44);
    cfg.ensure_all_consumed();
    if (rep) return {};

    const SpinSystem spin = atom.spin();
    Table table;
    table.header = {"omega_ratio", "delta_over_deltamax_analytic", "delta_over_deltamax_numeric"};

    std::vector<double> j0(grid.size());
    bessel_j0_batch(grid, j0);

    auto moment_after_ramp = [&](double ratio) {
        FieldConfig f(base.b_par, base.b_perp, base.rf_omega, ratio * base.rf_omega,
                      base.gradient);
        RampProfile ramp(t_up, 0.0, 0.0, f.rabi_omega);
        SpinState fin = propagate_ramp(ground_zeeman_state(spin), ramp, f, spin, tol);
        return period_averaged_moment(fin, f, spin, tol);
    };

    const double m0 = moment_after_ramp(0.0);
    std::vector<double> numeric(grid.size());
    parallel_for(static_cast<int>(grid.size()), opt.jobs,
                 [&](int i) { numeric[i] = std::fabs(moment_after_ramp(grid[i]) / m0); });

    for (std::size_t i = 0; i < grid.size(); ++i)
        table.rows.push_back({grid[i], std::fabs(j0[i]), numeric[i]});
    return table;
}

Table fig2b(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const double t_drift = cfg.time_or("drift_time", 45e-3);
    (void)parse_tol(cfg, opt);
    const std::vector<double> grid = parse_ratio_grid(cfg, 0.0, 4.3, 44);
    cfg.ensure_all_consumed();
    if (rep) return {};

    const SpinSystem spin = atom.spin();
    Table table;
    table.header = {"omega_ratio", "delta_signed_mm", "delta_abs_mm"};
    for (double r : grid) {
        const auto [signed_d, abs_d] = branch_displacements(r, base, spin, t_drift);
        table.rows.push_back({r, signed_d * 1e3, abs_d * 1e3});
    }
    return table;
}

Table fig3a(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep, units::tesla_from_milligauss(5.0));
    const double ratio = cfg.number_or("ratio", 2.8);
    const double t_up = cfg.time_or("ramp_up", 1e-3);
    const double tail = cfg.time_or("protocol_tail", 1e-3);
    const double tau_min = cfg.time_or("tau_min", 2e-6);
    const double tau_max = cfg.time_or("tau_max", tail);
    const long tau_points = cfg.integer_or("tau_points", 19);
    const std::string scale = cfg.text_or("tau_scale", "log");
    const double tol = parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) {
        if (ratio <= j0_first_zero())
            rep->warnings.push_back("rf power does not cross the dressed-ladder degeneracy");
        return {};
    }

    const SpinSystem spin = atom.spin();
    const FieldConfig field(base.b_par, base.b_perp, base.rf_omega, ratio * base.rf_omega,
                            base.gradient);
    std::vector<double> taus = scale == "linear" ? linspace(tau_min, tau_max, tau_points)
                                                 : logspace(tau_min, tau_max, tau_points);

    Table table;
    table.header = {"tau_us"};
    for (int k = 0; k < spin.dim(); ++k)
        table.header.push_back("p_" + std::string("m_") + m_label(spin.m_value(k)));
    table.rows.resize(taus.size());

    parallel_for(static_cast<int>(taus.size()), opt.jobs, [&](int i) {
        RampProfile ramp(t_up, tail - taus[i], taus[i], field.rabi_omega);
        SpinState fin = propagate_ramp(ground_zeeman_state(spin), ramp, field, spin, tol);
        std::vector<double>& row = table.rows[i];
        row.push_back(units::us_from_seconds(taus[i]));
        for (int k = 0; k < spin.dim(); ++k) row.push_back(fin.population(k));
    });
    return table;
}

Table fig3b(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const double ratio = cfg.number_or("ratio", 3.25);
    const double t_up = cfg.time_or("ramp_up", 20e-6);
    const double b_lo = cfg.field_or("bpar_min", 0.0);
    const double b_hi = cfg.field_or("bpar_max", units::tesla_from_milligauss(100.0));
    const long n = cfg.integer_or("bpar_points", 21);
    const double tol = parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) return {};

    const SpinSystem spin = atom.spin();
    const FieldConfig field(0.0, base.b_perp, base.rf_omega, ratio * base.rf_omega,
                            base.gradient);
    const RampProfile ramp(t_up, 0.0, 0.0, field.rabi_omega);
    const std::vector<double> bpars = linspace(b_lo, b_hi, n);

    Table table;
    table.header = {"bpar_mg", "p_adiabatic", "lz_ratio"};
    table.rows.resize(bpars.size());
    parallel_for(static_cast<int>(bpars.size()), opt.jobs, [&](int i) {
        FieldConfig f(bpars[i], field.b_perp, field.rf_omega, field.rabi_omega, field.gradient);
        const double p = adiabatic_fraction(f, ramp, spin, tol);
        table.rows[i] = {units::milligauss_from_tesla(bpars[i]), p,
                         lz_criterion(bpars[i], field.b_perp, t_up, spin.g_j)};
    });
    return table;
}

Table fig4gap(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const std::vector<double> grid = parse_ratio_grid(cfg, 0.25, 3.0, 12);
    TwoAtomModel::Options mopt;
    mopt.n_max = static_cast<int>(cfg.integer_or("n_max", 0));
    mopt.k2_ref = cfg.number_or("k2_ref", 1e-18);
    mopt.reference_density = cfg.number_or("reference_density", 1e20);
    (void)parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) return {};

    for (double r : grid)
        if (!(r > 0.0)) throw std::runtime_error("fig4gap: rf power ratio must be positive");

    Table table;
    table.header = {"omega_ratio", "gap_hz", "r_c_a0"};
    table.rows.resize(grid.size());
    parallel_for(static_cast<int>(grid.size()), opt.jobs, [&](int i) {
        FieldConfig f(base.b_par, base.b_perp, base.rf_omega, grid[i] * base.rf_omega,
                      base.gradient);
        TwoAtomModel model(atom.g_j, atom.mass, f, mopt);
        const LossEstimate est = model.crossing_gap();
        table.rows[i] = {grid[i], est.gap / codata().h, units::bohr_from_meters(est.r_c)};
    });
    return table;
}

Table gj_sweep(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const std::vector<double> grid = parse_ratio_grid(cfg, 0.0, 4.3, 44);
    const double tol = parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) return {};

    const SpinSystem spin = atom.spin();
    const auto numeric = effective_gj_sweep(spin, base, grid, tol);

    std::vector<double> j0(grid.size());
    bessel_j0_batch(grid, j0);

    Table table;
    table.header = {"omega_ratio", "gj_analytic", "gj_floquet", "degenerate"};
    for (std::size_t i = 0; i < grid.size(); ++i)
        table.rows.push_back({grid[i], atom.g_j * j0[i], numeric[i].value,
                              numeric[i].degenerate ? 1.0 : 0.0});
    return table;
}

Table quasienergy(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const std::vector<double> grid = parse_ratio_grid(cfg, 0.0, 4.3, 44);
    const double tol = parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) return {};

    const SpinSystem spin = atom.spin();
    Table table;
    table.header = {"omega_ratio"};
    for (int k = 0; k < spin.dim(); ++k)
        table.header.push_back("quasi_" + m_label(spin.m_value(k)) + "_khz");
    for (int k = 0; k < spin.dim(); ++k)
        table.header.push_back("analytic_" + m_label(spin.m_value(k)) + "_khz");

    FloquetContinuation cont(spin, base, tol);
    const auto c = codata();
    for (double r : grid) {
        const FloquetModes& modes = cont.advance_to(r);
        FieldConfig f(base.b_par, base.b_perp, base.rf_omega, r * base.rf_omega, base.gradient);
        const DressedSpectrum analytic = dressed_energies_analytic(spin, f);
        std::vector<double> row{r};
        for (int k = 0; k < spin.dim(); ++k)
            row.push_back(modes.quasienergies[k] / c.h / 1e3);
        for (int k = 0; k < spin.dim(); ++k) row.push_back(analytic.energies[k] / c.h / 1e3);
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table classical_avg(const Config& cfg, const RunOptions& opt, Report* rep) {
    const double lo = cfg.number_or("x_min", 0.0);
    const double hi = cfg.number_or("x_max", 20.0);
    const long n = cfg.integer_or("x_points", 201);
    (void)parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) return {};

    // the averaging runs at fixed rf frequency; only the ratio matters
    const double w = units::angular_from_hz(1e5);
    Table table;
    table.header = {"x", "averaged_moment", "bessel_j0", "abs_diff"};
    const std::vector<double> grid = linspace(lo, hi, n);
    std::vector<double> j0(grid.size());
    bessel_j0_batch(grid, j0);
    table.rows.resize(grid.size());
    parallel_for(static_cast<int>(grid.size()), opt.jobs, [&](int i) {
        const double avg = time_averaged_moment(grid[i] * w, w);
        table.rows[i] = {grid[i], avg, j0[i], std::fabs(avg - j0[i])};
    });
    return table;
}

Table channels(const Config& cfg, const RunOptions& opt, Report* rep) {
    const AtomParams atom = parse_atom(cfg, rep);
    const FieldConfig base = parse_field(cfg, atom, 0.0, rep);
    const double ratio = cfg.number_or("ratio", 1.0);
    const double r_lo = cfg.length_or("r_min", units::meters_from_bohr(300.0));
    const double r_hi = cfg.length_or("r_max", units::meters_from_bohr(3000.0));
    const long npts = cfg.integer_or("r_points", 120);
    TwoAtomModel::Options mopt;
    mopt.n_max = static_cast<int>(cfg.integer_or("n_max", 0));
    (void)parse_tol(cfg, opt);
    cfg.ensure_all_consumed();
    if (rep) return {};

    FieldConfig f(base.b_par, base.b_perp, base.rf_omega, ratio * base.rf_omega, base.gradient);
    TwoAtomModel model(atom.g_j, atom.mass, f, mopt);

    std::vector<double> r_desc = logspace(r_lo, r_hi, npts);
    std::reverse(r_desc.begin(), r_desc.end());
    const PotentialCurve curves = model.adiabatic_potentials(r_desc);

    // emit the two central manifolds (the entrance one and the first below)
    std::vector<int> selected;
    for (std::size_t k = 0; k < curves.labels.size(); ++k)
        if (curves.labels[k].n == 0 || curves.labels[k].n == -1)
            selected.push_back(static_cast<int>(k));

    Table table;
    table.header = {"r_a0"};
    for (int k : selected) {
        const Channel& ch = curves.labels[k];
        char buf[64];
        std::snprintf(buf, sizeof buf, "e_s%d_ms%+d_l%d_ml%+d_n%+d_khz", ch.s, ch.ms, ch.l,
                      ch.ml, ch.n);
        table.header.push_back(buf);
    }
    const auto c = codata();
    for (std::size_t i = 0; i < curves.r_grid.size(); ++i) {
        std::vector<double> row{units::bohr_from_meters(curves.r_grid[i])};
        for (int k : selected) row.push_back(curves.energies(k, i) / c.h / 1e3);
        table.rows.push_back(std::move(row));
    }
    return table;
}

const std::map<std::string, ScenarioFn>& registry() {
    static const std::map<std::string, ScenarioFn> reg = {
        {"fig1", fig1},         {"fig2b", fig2b},
        {"fig3a", fig3a},       {"fig3b", fig3b},
        {"fig4gap", fig4gap},   {"gj-sweep", gj_sweep},
        {"quasienergy", quasienergy}, {"classical-avg", classical_avg},
        {"channels", channels},
    };
    return reg;
}

}  // namespace

std::vector<std::string> scenario_names() {
    std::vector<std::string> names;
    for (const auto& [k, v] : registry()) {
        (void)v;
        names.push_back(k);
    }
    return names;
}

bool is_scenario(const std::string& name) { return registry().count(name) != 0; }

Table compute_scenario(const std::string& name, const Config& cfg, const RunOptions& options) {
    auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown scenario '" + name + "'");
    return it->second(cfg, options, nullptr);
}

Report validate_scenario(const std::string& name, const Config& cfg) {
    auto it = registry().find(name);
    if (it == registry().end()) throw ConfigError("unknown scenario '" + name + "'");
    Report rep;
    RunOptions opt;
    it->second(cfg, opt, &rep);
    return rep;
}

std::filesystem::path run_scenario(const std::string& name, const std::filesystem::path& config,
                                   const RunOptions& options) {
    Config cfg = Config::load(config);
    std::string out = options.out_path ? *options.out_path : cfg.text_or("out", name + ".csv");
    const Table table = compute_scenario(name, cfg, options);
    const std::filesystem::path out_path(out);
    write_csv(table, out_path);
    return out_path;
}

}  // namespace rfdress::scenario
