#include "focklab/calibration.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "focklab/spaces.hpp"
#include "focklab/transforms.hpp"

#ifndef FOCKLAB_DEFAULT_CALIBRATION
#define FOCKLAB_DEFAULT_CALIBRATION "calibration/focklab.cal"
#endif

namespace focklab {

namespace {

std::string number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::ostringstream os;
        os.precision(6);
        os << v[i];
        out += (i ? ", " : "") + os.str();
    }
    return out;
}

struct Range {
    double lo = 1e300;
    double hi = -1e300;
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

void set_interval(Calibration& c, const std::string& prefix, const Range& r, double margin, const std::string& what) {
    const std::string note = what + "\nobserved [" + number(r.lo) + ", " + number(r.hi) + "], widened by the margin";
    c.set(prefix + ".lower", r.lo / margin, note);
    c.set(prefix + ".upper", r.hi * margin);
}

}  // namespace

void Calibration::set(std::string key, double value, std::string note) {
    for (Entry& e : entries_)
        if (e.key == key) {
            e.value = value;
            if (!note.empty()) e.note = std::move(note);
            return;
        }
    entries_.push_back({std::move(key), value, std::move(note)});
}

bool Calibration::has(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
}

double Calibration::get(std::string_view key) const {
    for (const Entry& e : entries_)
        if (e.key == key) return e.value;
    throw std::runtime_error("calibration " + (source.empty() ? std::string("<memory>") : source) + ": missing key '" +
                             std::string(key) + "' (rerun `focklab calibrate`)");
}

Interval Calibration::interval(std::string_view prefix) const {
    const std::string p(prefix);
    return {get(p + ".lower"), get(p + ".upper")};
}

GrowthThresholds Calibration::growth_thresholds() const { return {get("growth.G"), get("growth.S")}; }

std::filesystem::path calibration_path() {
    if (const char* env = std::getenv("FOCKLAB_CALIBRATION"); env && *env) return env;
    return FOCKLAB_DEFAULT_CALIBRATION;
}

Calibration parse_calibration(std::string_view text, std::string source) {
    Calibration c;
    c.source = std::move(source);
    std::string pending;
    bool seen_entry = false;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++lineno;
        if (line.empty()) {
            // a blank line closes the header block
            if (!seen_entry && !pending.empty()) {
                c.header = std::move(pending);
                pending.clear();
            }
            continue;
        }
        if (line.front() == '#') {
            std::string_view body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            pending += (pending.empty() ? "" : "\n") + std::string(body);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error(c.source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view val = trim(line.substr(eq + 1));
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
        if (key.empty() || ec != std::errc() || ptr != val.data() + val.size())
            throw std::runtime_error(c.source + ":" + std::to_string(lineno) + ": bad entry '" + std::string(line) + "'");
        if (c.has(key)) throw std::runtime_error(c.source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        c.set(key, v, std::move(pending));
        pending.clear();
        seen_entry = true;
    }
    return c;
}

Calibration load_calibration(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read calibration file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_calibration(buf.str(), path.string());
}

Calibration load_calibration() { return load_calibration(calibration_path()); }

std::string format_calibration(const Calibration& c) {
    std::ostringstream os;
    auto comment = [&os](const std::string& text) {
        std::istringstream lines(text);
        std::string l;
        while (std::getline(lines, l)) os << (l.empty() ? "#" : "# " + l) << '\n';
    };
    if (!c.header.empty()) {
        comment(c.header);
        os << '\n';
    }
    for (const auto& e : c.entries()) {
        if (!e.note.empty()) {
            os << '\n';
            comment(e.note);
        }
        os << e.key << " = " << number(e.value) << '\n';
    }
    return os.str();
}

void write_calibration(const Calibration& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write calibration file '" + path.string() + "'");
    out << format_calibration(c);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

Calibration run_calibration(const CalibrationOptions& options, std::ostream* log) {
    if (options.vectors < 1 || options.truncations.empty() || !(options.margin >= 1.0))
        throw std::invalid_argument("calibration: need vectors >= 1, a truncation list and margin >= 1");
    auto say = [log](const std::string& s) {
        if (log) *log << s << '\n' << std::flush;
    };
    Calibration c;
    c.header =
        "focklab calibration file, written by `focklab calibrate`.\n"
        "Constants below are measured by an oracle run, never chosen by hand.\n"
        "Override the path with FOCKLAB_CALIBRATION.";
    std::string sweep = "N in {";
    for (std::size_t i = 0; i < options.truncations.size(); ++i)
        sweep += (i ? "," : "") + std::to_string(options.truncations[i]);
    sweep += "}";
    c.set("calibration.seed", static_cast<double>(options.seed), "random test set: seed, vectors per N, interval margin");
    c.set("calibration.vectors", options.vectors);
    c.set("calibration.margin", options.margin);

    // growth thresholds from the reference probes at s = 1
    say("probes: constant, signum, chirp43 at s = 1, " + sweep);
    const GrowthThresholds provisional{1.0, 1.0};
    const MultiplierSpec constant = constant_multiplier(1.0), signum = signum_multiplier(), chirp = chirp43_multiplier();
    const GrowthReport const_h = boundedness_probe(constant, 1, 1.0, options.truncations, provisional);
    const GrowthReport const_c = classical_sobolev_probe(constant, 1.0, options.truncations, provisional);
    const GrowthReport chirp_h = boundedness_probe(chirp, 1, 1.0, options.truncations, provisional);
    const GrowthReport chirp_c = classical_sobolev_probe(chirp, 1.0, options.truncations, provisional);
    const GrowthReport sign_h = boundedness_probe(signum, 1, 1.0, options.truncations, provisional);
    const double stable = std::max({const_h.max_over_min, const_c.max_over_min, chirp_h.max_over_min});
    const double growing = std::min(sign_h.last_over_first, chirp_c.last_over_first);
    if (!(stable < growing))
        throw std::runtime_error("calibration: stable spread " + number(stable) + " does not separate from growth ratio " +
                                 number(growing) + "; the probes cannot be classified");
    const double G = std::sqrt(stable * growing);
    c.set("growth.G", G,
          "growth thresholds, s = 1, " + sweep +
              "\nhermite norms: constant [" + join(const_h.norms) + "], chirp43 [" + join(chirp_h.norms) + "], signum [" +
              join(sign_h.norms) + "]\nclassical norms: constant [" + join(const_c.norms) + "], chirp43 [" +
              join(chirp_c.norms) + "]\nlargest stable max/min " + number(stable) + ", smallest growing last/first " +
              number(growing) + "\nG = S = geometric mean of the two");
    c.set("growth.S", G);

    std::mt19937_64 rng(options.seed);
    auto vectors = [&](int N, Basis basis) {
        std::vector<SpectralVector> out;
        for (int i = 0; i < options.vectors; ++i)
            out.push_back(SpectralVector::random(1, N, std::max(1, N / 2), basis, rng));
        return out;
    };
    const std::string set_desc = std::to_string(options.vectors) + " random vectors per N (band N/2), " + sweep;

    // localization equivalence (bump partition, 1D)
    {
        const PartitionBump bump(1);
        Range r0, r1;
        for (int N : options.truncations) {
            say("localization: N = " + std::to_string(N));
            for (const SpectralVector& v : vectors(N, Basis::bargmann_hermite)) {
                r0.add(localization_norm(v, SmoothnessOrder(0.0), bump).norm / sobolev_norm(v, SmoothnessOrder(0.0)));
                r1.add(localization_norm(v, SmoothnessOrder(1.0), bump).norm / sobolev_norm(v, SmoothnessOrder(1.0)));
            }
        }
        set_interval(c, "localization.s0", r0, options.margin, "localization_norm / sobolev_norm at s = 0, " + set_desc);
        set_interval(c, "localization.s1", r1, options.margin, "localization_norm / sobolev_norm at s = 1, " + set_desc);
    }

    // weighted Fock norm equivalence
    {
        Range r;
        for (int N : options.truncations) {
            say("weighted Fock norm: N = " + std::to_string(N));
            const QuadratureGrid grid = gauss_hermite(N + 24, 1.0, 2);
            for (const SpectralVector& v : vectors(N, Basis::fock))
                r.add(weighted_fock_norm(v, SmoothnessOrder(1.0), grid) / sobolev_norm(v, SmoothnessOrder(1.0)));
        }
        set_interval(c, "weighted_fock.s1", r, options.margin,
                     "weighted_fock_norm / sobolev_norm at s = 1 (order N + 24 grid), " + set_desc);
    }

    // |x|^{2s} H^{-s} bound
    for (const auto& [key, s] : {std::pair{"potential.s0_5", 0.5}, std::pair{"potential.s1", 1.0}}) {
        Range r;
        for (int N : options.truncations) {
            say(std::string(key) + ": N = " + std::to_string(N));
            for (const SpectralVector& v : vectors(N, Basis::bargmann_hermite))
                r.add(potential_bound_probe(v, SmoothnessOrder(s)));
        }
        c.set(std::string(key) + ".upper", r.hi * options.margin,
              "|| |x|^{2s} H^{-s} v || / || v || at s = " + number(s) + ", " + set_desc + "\nobserved max " +
                  number(r.hi) + ", widened by the margin");
    }

    // ladder norm equivalence, paper-Hermite convention
    for (int k : {1, 2}) {
        Range r;
        for (int N : options.truncations) {
            say("ladder norm k = " + std::to_string(k) + ": N = " + std::to_string(N));
            for (const SpectralVector& v : vectors(N, Basis::paper_hermite))
                r.add(ladder_norm(v, k) / sobolev_norm(v, SmoothnessOrder(k)));
        }
        set_interval(c, "ladder.k" + std::to_string(k), r, options.margin,
                     "ladder_norm / sobolev_norm at k = " + std::to_string(k) + ", " + set_desc);
    }

    // Weyl bound constant over an a-grid
    {
        double worst = 0.0;
        const double angles[] = {0.0, 1.0, 2.5, 4.0};
        const double radii[] = {0.25, 0.5, 1.0, 2.0};
        const double orders[] = {0.0, 0.5, 1.0, 2.0};
        for (int N : options.truncations) {
            say("weyl bound: N = " + std::to_string(N));
            const auto vs = vectors(N, Basis::fock);
            for (std::size_t i = 0; i < vs.size(); ++i) {
                // one a per vector keeps the cost linear in the set size
                const double rad = radii[i % 4], ang = angles[(i / 4) % 4];
                const Complex a[1] = {std::polar(rad, ang)};
                for (double s : orders) worst = std::max(worst, weyl_bound_ratio(a, vs[i], s));
            }
        }
        c.set("weyl.C", worst * options.margin,
              "||W_a v||_s / ((1 + |a|^s) ||v||_s), |a| in {0.25, 0.5, 1, 2}, four directions,\ns in {0, 0.5, 1, 2}, " +
                  set_desc + "\nobserved max " + number(worst) + ", widened by the margin");
    }
    say("done");
    return c;
}

}  // namespace focklab
