// focklab command-line front end: verify, symbol, probe, export, calibrate.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "focklab/calibration.hpp"
#include "focklab/spaces.hpp"
#include "focklab/transforms.hpp"
#include "focklab/verify.hpp"
#include "focklab/zhu.hpp"

using namespace focklab;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

/// Configuration problems: reported with the field name, exit status 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string timestamp() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

double parse_number(std::string_view text, const std::string& field) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ConfigError(field + ": not a number: '" + std::string(text) + "'");
    return v;
}

/// "re" or "re,im"
Complex parse_complex(const std::string& text, const std::string& field) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return parse_number(text, field);
    return {parse_number(std::string_view(text).substr(0, comma), field),
            parse_number(std::string_view(text).substr(comma + 1), field)};
}

struct Common {
    int n = 1;
    std::vector<int> N;
    double s = 0.0;
    int quad_order = 0;
    std::string multiplier;
    std::string format = "json";
    std::string out;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* app, Common& c, bool with_format = true) {
    app->add_option("--n", c.n, "dimension (1, 2 or 3)");
    app->add_option("--N", c.N, "truncation order; repeat for a list")->take_all();
    app->add_option("--quad-order", c.quad_order, "quadrature points per axis (>= N + 8)");
    app->add_option("--seed", c.seed, "seed for random test vectors");
    app->add_option("--out", c.out, "output path (stdout when omitted)");
    if (with_format) app->add_option("--format", c.format, "json or csv");
}

void validate_common(const Common& c, const std::vector<std::string>& formats) {
    if (c.n < 1 || c.n > 3) throw ConfigError("n: must be 1, 2 or 3 (got " + std::to_string(c.n) + ")");
    for (int N : c.N)
        if (N < 4) throw ConfigError("N: must be at least 4 (got " + std::to_string(N) + ")");
    for (std::size_t i = 1; i < c.N.size(); ++i)
        if (c.N[i] <= c.N[i - 1]) throw ConfigError("N: list must be strictly increasing");
    if (c.quad_order != 0) {
        const int top = c.N.empty() ? 4 : c.N.back();
        if (c.quad_order < top + 8)
            throw ConfigError("quad-order: must be at least N + 8 = " + std::to_string(top + 8) + " (got " +
                              std::to_string(c.quad_order) + ")");
    }
    if (!(c.s >= 0.0)) throw ConfigError("s: must be >= 0");
    if (std::find(formats.begin(), formats.end(), c.format) == formats.end()) {
        std::string allowed;
        for (const auto& f : formats) allowed += (allowed.empty() ? "" : ", ") + f;
        throw ConfigError("format: expected one of " + allowed + " (got '" + c.format + "')");
    }
}

MultiplierSpec multiplier_or_config_error(const std::string& text, int n) {
    if (text.empty()) throw ConfigError("multiplier: required");
    try {
        MultiplierSpec m = parse_multiplier(text);
        m.require_dim(n);
        return m;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("multiplier: ") + e.what());
    }
}

Calibration calibration_or_config_error() {
    try {
        return load_calibration();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("calibration: ") + e.what());
    }
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + c.out + "'");
    f << text;
    if (!f) throw std::runtime_error("write failed for '" + c.out + "'");
}

json header(const std::string& command) {
    json j;
    j["schema"] = "focklab/1";
    j["command"] = command;
    j["generated_at"] = timestamp();
    return j;
}

std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

// ---- verify ----

json record_json(const CheckRecord& r) {
    json j;
    j["id"] = r.id;
    j["status"] = std::string(check_status_name(r.status));
    json in = json::object();
    for (const auto& [k, v] : r.inputs) in[k] = v;
    j["inputs"] = in;
    json m = json::object();
    for (const auto& [k, v] : r.measured) m[k] = number(v);
    j["measured"] = m;
    j["tolerance"] = r.tolerance ? number(*r.tolerance) : json(nullptr);
    j["comparison"] = r.comparison;
    j["note"] = r.note;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

int cmd_verify(const Common& c, const std::map<std::string, double>& tolerances) {
    validate_common(c, {"json", "csv"});
    if (c.N.size() > 1) throw ConfigError("N: verify takes a single truncation");
    VerifyConfig cfg;
    cfg.dim = c.n;
    if (!c.N.empty()) cfg.truncation = c.N.front();
    cfg.quad_order = c.quad_order;
    cfg.seed = c.seed;
    cfg.tolerance_overrides = tolerances;
    try {
        validate_verify_config(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const Calibration cal = calibration_or_config_error();
    const auto records = run_verify(cfg, cal);
    int counts[3] = {0, 0, 0};
    for (const auto& r : records) {
        ++counts[static_cast<int>(r.status)];
        std::fprintf(stderr, "%-13s %-42s %8.2fs%s%s\n", std::string(check_status_name(r.status)).c_str(), r.id.c_str(),
                     r.wall_seconds, r.note.empty() ? "" : "  ", r.note.c_str());
    }
    const int status = verify_exit_status(records);
    if (c.format == "json") {
        json j = header("verify");
        j["config"] = {{"n", cfg.dim}, {"N", cfg.truncation}, {"quad_order", cfg.quad_order}, {"seed", cfg.seed}};
        json tol = json::object();
        for (const auto& [k, v] : tolerances) tol[k] = v;
        j["config"]["tolerance_overrides"] = tol;
        j["calibration"] = calibration_path().string();
        json recs = json::array();
        for (const auto& r : records) recs.push_back(record_json(r));
        j["records"] = recs;
        j["summary"] = {{"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}, {"exit_status", status}};
        emit(c, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "id,status,measure,value,tolerance,comparison,wall_seconds,note\n";
        for (const auto& r : records) {
            const std::string key = r.measured.empty() ? "" : r.measured.front().first;
            const std::string val = r.measured.empty() ? "" : g17(r.measured.front().second);
            os << r.id << ',' << check_status_name(r.status) << ',' << csv_field(key) << ',' << val << ','
               << (r.tolerance ? g17(*r.tolerance) : "") << ',' << r.comparison << ',' << g17(r.wall_seconds) << ','
               << csv_field(r.note) << '\n';
        }
        emit(c, os.str());
    }
    std::fprintf(stderr, "verify: %d pass, %d fail, %d inconclusive\n", counts[0], counts[1], counts[2]);
    return status;
}

// ---- symbol ----

int cmd_symbol(const Common& c, const std::vector<std::string>& zs) {
    validate_common(c, {"json", "csv"});
    const MultiplierSpec m = multiplier_or_config_error(c.multiplier, c.n);
    const int order = c.quad_order > 0 ? c.quad_order : kDefaultSymbolOrder;
    SymbolSpec phi;
    try {
        phi = symbol_from_multiplier(m, c.n, order);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    // points: each --z holds n complex components "re,im;re,im"
    std::vector<std::vector<Complex>> points;
    if (zs.empty()) {
        for (int i = -2; i <= 2; ++i)
            for (int j = -2; j <= 2; ++j) {
                std::vector<Complex> z(static_cast<std::size_t>(c.n), 0.0);
                z[0] = Complex(i, j);
                points.push_back(z);
            }
    } else {
        for (const std::string& text : zs) {
            std::vector<Complex> z;
            std::stringstream ss(text);
            std::string part;
            while (std::getline(ss, part, ';')) z.push_back(parse_complex(part, "z"));
            if (static_cast<int>(z.size()) != c.n)
                throw ConfigError("z: expected " + std::to_string(c.n) + " components separated by ';' in '" + text + "'");
            points.push_back(std::move(z));
        }
    }
    std::vector<Complex> values;
    for (const auto& z : points) values.push_back(phi(z));
    if (c.format == "json") {
        json j = header("symbol");
        j["config"] = {{"n", c.n}, {"multiplier", m.label}, {"quad_order", order}};
        j["reliable_abs_re"] = phi.reliable_real;
        json rows = json::array();
        for (std::size_t p = 0; p < points.size(); ++p) {
            json re = json::array(), im = json::array();
            for (const Complex& z : points[p]) {
                re.push_back(z.real());
                im.push_back(z.imag());
            }
            rows.push_back({{"re_z", c.n == 1 ? re[0] : re},
                            {"im_z", c.n == 1 ? im[0] : im},
                            {"re_phi", number(values[p].real())},
                            {"im_phi", number(values[p].imag())},
                            {"reliable", phi.reliable_at(points[p])}});
        }
        j["values"] = rows;
        emit(c, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        for (int k = 0; k < c.n; ++k) {
            const std::string sfx = c.n == 1 ? "" : std::to_string(k + 1);
            os << "re_z" << sfx << ",im_z" << sfx << ',';
        }
        os << "re_phi,im_phi\n";
        for (std::size_t p = 0; p < points.size(); ++p) {
            for (const Complex& z : points[p]) os << g17(z.real()) << ',' << g17(z.imag()) << ',';
            os << g17(values[p].real()) << ',' << g17(values[p].imag()) << '\n';
        }
        emit(c, os.str());
    }
    return 0;
}

// ---- probe ----

json report_json(const GrowthReport& g) {
    json j;
    j["side"] = g.side;
    j["multiplier"] = g.multiplier;
    j["n"] = g.dim;
    j["s"] = g.s;
    j["N"] = g.truncations;
    json norms = json::array();
    for (double v : g.norms) norms.push_back(number(v));
    j["norms"] = norms;
    j["converged"] = g.converged;
    j["last_over_first"] = number(g.last_over_first);
    j["max_over_min"] = number(g.max_over_min);
    j["classification"] = std::string(growth_class_name(g.classification));
    j["thresholds"] = {{"G", g.thresholds.G}, {"S", g.thresholds.S}};
    j["warnings"] = g.warnings;
    return j;
}

int cmd_probe(Common c, bool classical) {
    if (c.N.empty()) c.N = {8, 16, 32, 64};
    validate_common(c, {"json", "csv"});
    const MultiplierSpec m = multiplier_or_config_error(c.multiplier, c.n);
    if (classical && c.n != 1) throw ConfigError("classical: the classical probe is one-dimensional");
    if (c.quad_order != 0 && c.quad_order < 2 * c.N.back())
        throw ConfigError("quad-order: the multiplier matrix needs at least 2N = " + std::to_string(2 * c.N.back()));
    const Calibration cal = calibration_or_config_error();
    const GrowthThresholds th = cal.growth_thresholds();
    std::vector<GrowthReport> reports;
    reports.push_back(boundedness_probe(m, c.n, c.s, c.N, th, c.quad_order));
    if (classical) reports.push_back(classical_sobolev_probe(m, c.s, c.N, th));
    for (const auto& r : reports)
        std::fprintf(stderr, "%s side: %s (last/first %.6g, max/min %.6g)\n", r.side.c_str(),
                     std::string(growth_class_name(r.classification)).c_str(), r.last_over_first, r.max_over_min);
    if (c.format == "json") {
        json j = header("probe");
        j["config"] = {{"n", c.n}, {"multiplier", m.label}, {"s", c.s}, {"N", c.N}, {"quad_order", c.quad_order},
                       {"classical", classical}};
        j["calibration"] = calibration_path().string();
        j["evidence"] = "heuristic: truncated norms indicate, but do not prove, (un)boundedness";
        json rs = json::array();
        for (const auto& r : reports) rs.push_back(report_json(r));
        j["reports"] = rs;
        emit(c, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "side,multiplier,s,N,norm,converged,classification\n";
        for (const auto& r : reports)
            for (std::size_t i = 0; i < r.norms.size(); ++i)
                os << r.side << ',' << csv_field(r.multiplier) << ',' << g17(r.s) << ',' << r.truncations[i] << ','
                   << g17(r.norms[i]) << ',' << (r.converged[i] ? "true" : "false") << ','
                   << growth_class_name(r.classification) << '\n';
        emit(c, os.str());
    }
    return 0;
}

// ---- export ----

int cmd_export(Common c, const std::string& matrix, const std::vector<std::string>& a_text) {
    if (c.N.empty()) c.N = {16};
    if (c.format == "json") c.format = "bin";
    validate_common(c, {"bin", "csv"});
    if (c.N.size() != 1) throw ConfigError("N: export takes a single truncation");
    if (c.out.empty()) throw ConfigError("out: export needs an output path");
    const int N = c.N.front();
    std::vector<Complex> a;
    for (const auto& t : a_text) a.push_back(parse_complex(t, "a"));
    auto need_a = [&](bool real) {
        if (a.empty()) a.assign(static_cast<std::size_t>(c.n), 0.0);
        if (static_cast<int>(a.size()) != c.n)
            throw ConfigError("a: expected " + std::to_string(c.n) + " components (one --a per axis)");
        if (real)
            for (const Complex& x : a)
                if (x.imag() != 0.0) throw ConfigError("a: translation takes real components");
    };
    OperatorMatrix out(c.n, N, Basis::fock);
    if (matrix == "identity") {
        out = OperatorMatrix::identity(c.n, N, Basis::bargmann_hermite);
    } else if (matrix == "rotation") {
        out = rotation_matrix(c.n, N);
    } else if (matrix == "weyl") {
        need_a(false);
        out = weyl_matrix(a, N);
    } else if (matrix == "translation") {
        need_a(true);
        std::vector<double> ar;
        for (const Complex& x : a) ar.push_back(x.real());
        out = translation_matrix(ar, N);
    } else if (matrix == "multiplier") {
        const MultiplierSpec m = multiplier_or_config_error(c.multiplier, c.n);
        if (c.quad_order != 0 && c.quad_order < 2 * N) throw ConfigError("quad-order: needs at least 2N");
        out = conjugated_multiplier_matrix(m, c.n, N, c.quad_order);
    } else if (matrix == "s_phi") {
        const MultiplierSpec m = multiplier_or_config_error(c.multiplier, c.n);
        SPhiOptions opt;
        if (c.quad_order != 0) opt.quad_order = c.quad_order;
        out = s_phi_matrix(symbol_from_multiplier(m, c.n), N, opt);
    } else {
        throw ConfigError("matrix: expected identity, rotation, weyl, translation, multiplier or s_phi (got '" + matrix +
                          "')");
    }
    out.set_smoothness(c.s, c.s);
    for (const auto& w : out.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    try {
        if (c.format == "csv")
            write_csv(out, c.out);
        else
            write_binary(out, c.out);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("export: ") + e.what());
    }
    std::fprintf(stderr, "wrote %s matrix (n=%d, N=%d, %zu x %zu, %s) to %s\n", matrix.c_str(), c.n, N, out.size(),
                 out.size(), std::string(basis_name(out.basis())).c_str(), c.out.c_str());
    return 0;
}

// ---- calibrate ----

int cmd_calibrate(Common c, bool seed_given, int vectors, double margin) {
    validate_common(c, {"json"});
    CalibrationOptions opt;
    if (!c.N.empty()) opt.truncations = c.N;
    if (seed_given) opt.seed = c.seed;
    if (vectors < 1) throw ConfigError("vectors: must be >= 1");
    if (!(margin >= 1.0)) throw ConfigError("margin: must be >= 1");
    opt.vectors = vectors;
    opt.margin = margin;
    const std::filesystem::path path = c.out.empty() ? calibration_path() : std::filesystem::path(c.out);
    const Calibration cal = run_calibration(opt, &std::cerr);
    write_calibration(cal, path);
    std::fprintf(stderr, "calibration written to %s (G = S = %.6g)\n", path.string().c_str(), cal.get("growth.G"));
    return 0;
}

/// Pulls "--tol.<id>=v" / "--tol.<id> v" out of argv (CLI11 cannot declare
/// options named after runtime check ids).
std::map<std::string, double> take_tolerances(std::vector<std::string>& args) {
    std::map<std::string, double> out;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a.rfind("--tol.", 0) != 0) {
            rest.push_back(a);
            continue;
        }
        std::string id = a.substr(6), value;
        if (const auto eq = id.find('='); eq != std::string::npos) {
            value = id.substr(eq + 1);
            id = id.substr(0, eq);
        } else {
            if (i + 1 >= args.size()) throw ConfigError("tol." + id + ": missing value");
            value = args[++i];
        }
        if (id.empty()) throw ConfigError("tol.: missing check id");
        out[id] = parse_number(value, "tol." + id);
    }
    args = std::move(rest);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::map<std::string, double> tolerances;
    try {
        tolerances = take_tolerances(args);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }

    CLI::App app{"focklab: Hermite-Sobolev multipliers and Zhu's operator on the Fock space"};
    app.name("focklab");
    app.require_subcommand(1);
    Common common;
    std::vector<std::string> zs, a_text;
    std::string matrix;
    bool classical = false;
    int vectors = CalibrationOptions{}.vectors;
    double margin = CalibrationOptions{}.margin;

    CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
    add_common(verify, common);

    CLI::App* symbol = app.add_subcommand("symbol", "tabulate the symbol phi of a multiplier");
    add_common(symbol, common);
    symbol->add_option("--multiplier", common.multiplier, "multiplier id, e.g. modulation(1)");
    symbol->add_option("--z", zs, "point: 're,im' per axis, axes separated by ';' (repeatable)")->take_all();

    CLI::App* probe = app.add_subcommand("probe", "truncated operator norms and growth classification");
    add_common(probe, common);
    probe->add_option("--multiplier", common.multiplier, "multiplier id");
    probe->add_option("--s", common.s, "smoothness order s >= 0");
    probe->add_flag("--classical", classical, "also run the classical W^{s,2} probe (n = 1)");

    CLI::App* exporter = app.add_subcommand("export", "write an operator matrix");
    add_common(exporter, common, false);
    exporter->add_option("--format", common.format, "bin (default) or csv");
    exporter->add_option("--matrix", matrix, "identity, rotation, weyl, translation, multiplier or s_phi")->required();
    exporter->add_option("--a", a_text, "shift component 're' or 're,im' (repeat per axis)")->take_all();
    exporter->add_option("--multiplier", common.multiplier, "multiplier id for multiplier and s_phi");
    exporter->add_option("--s", common.s, "smoothness tag stored in the header");

    CLI::App* calibrate = app.add_subcommand("calibrate", "oracle run that writes the calibration file");
    add_common(calibrate, common, false);
    calibrate->add_option("--vectors", vectors, "random vectors per truncation");
    calibrate->add_option("--margin", margin, "factor widening the observed intervals");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    if (!tolerances.empty() && !verify->parsed()) {
        std::cerr << "configuration error: --tol.<id> applies to verify only\n";
        return kExitConfig;
    }

    try {
        if (const double d = convention_self_test(); !(d < 1e-10)) {
            std::cerr << "self-test failed: B h^_0 differs from 1 by " << d << '\n';
            return kExitFail;
        }
        if (verify->parsed()) return cmd_verify(common, tolerances);
        if (symbol->parsed()) return cmd_symbol(common, zs);
        if (probe->parsed()) return cmd_probe(common, classical);
        if (exporter->parsed()) return cmd_export(common, matrix, a_text);
        if (calibrate->parsed()) return cmd_calibrate(common, calibrate->count("--seed") > 0, vectors, margin);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitConfig;
}
