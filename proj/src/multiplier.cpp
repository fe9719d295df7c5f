#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "focklab/zhu.hpp"

namespace focklab {

namespace {

std::string format_number(double v) {
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

double parse_double(std::string_view text, std::string_view context) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw std::invalid_argument("multiplier " + std::string(context) + ": not a number: '" + std::string(text) + "'");
    return v;
}

// splits on top-level commas
std::vector<std::string_view> split_args(std::string_view s) {
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '(') ++depth;
        if (s[i] == ')') --depth;
        if (s[i] == ',' && depth == 0) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

double norm2(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc;
}

}  // namespace

void MultiplierSpec::require_dim(int n) const {
    if (dim != 0 && dim != n)
        throw std::invalid_argument("multiplier " + label + " is defined in dimension " + std::to_string(dim) +
                                    ", requested " + std::to_string(n));
}

MultiplierSpec constant_multiplier(Complex c) {
    MultiplierSpec m;
    m.kind = "constant";
    m.label = c.imag() == 0.0 ? "constant(" + format_number(c.real()) + ")"
                              : "constant(" + format_number(c.real()) + "," + format_number(c.imag()) + ")";
    m.parameters = {c.real(), c.imag()};
    m.eval = [c](std::span<const double>) { return c; };
    m.sup_norm = std::abs(c);
    m.smooth = true;
    return m;
}

MultiplierSpec modulation_multiplier(std::vector<double> c) {
    if (c.empty() || c.size() > static_cast<std::size_t>(kMaxDim))
        throw std::invalid_argument("multiplier modulation: needs 1 to 3 components");
    MultiplierSpec m;
    m.kind = "modulation";
    m.label = "modulation(";
    for (std::size_t j = 0; j < c.size(); ++j) m.label += (j ? "," : "") + format_number(c[j]);
    m.label += ")";
    m.dim = static_cast<int>(c.size());
    m.parameters = c;
    m.eval = [c](std::span<const double> x) {
        double phase = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) phase += c[j] * x[j];
        return std::polar(1.0, -2.0 * phase);
    };
    m.sup_norm = 1.0;
    m.smooth = true;
    return m;
}

MultiplierSpec signum_multiplier() {
    MultiplierSpec m;
    m.kind = m.label = "signum";
    m.dim = 1;
    m.eval = [](std::span<const double> x) { return Complex(x[0] > 0.0 ? 1.0 : (x[0] < 0.0 ? -1.0 : 0.0)); };
    m.sup_norm = 1.0;
    m.breakpoints = {0.0};
    return m;
}

MultiplierSpec chirp43_multiplier() {
    MultiplierSpec m;
    m.kind = m.label = "chirp43";
    m.eval = [](std::span<const double> x) { return std::polar(1.0, std::pow(norm2(x), 2.0 / 3.0)); };
    m.sup_norm = 1.0;
    m.breakpoints = {0.0};
    return m;
}

MultiplierSpec bump_multiplier() {
    MultiplierSpec m;
    m.kind = m.label = "bump";
    m.eval = [](std::span<const double> x) { return Complex(std::exp(-norm2(x))); };
    m.sup_norm = 1.0;
    m.smooth = true;
    return m;
}

MultiplierSpec ripple_multiplier() {
    MultiplierSpec m;
    m.kind = m.label = "ripple";
    m.eval = [](std::span<const double> x) {
        double v = 1.0;
        for (double xi : x) v *= (2.0 + std::sin(2.0 * xi)) / 3.0;
        return Complex(v);
    };
    m.sup_norm = 1.0;
    m.smooth = true;
    return m;
}

MultiplierSpec grid_multiplier(std::vector<double> x, std::vector<Complex> values) {
    if (x.size() < 2 || x.size() != values.size())
        throw std::invalid_argument("multiplier grid: needs at least two samples with matching values");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw std::invalid_argument("multiplier grid: abscissae must increase strictly");
    MultiplierSpec m;
    m.kind = "grid";
    m.label = "grid";
    m.dim = 1;
    double sup = 0.0;
    for (const Complex& v : values) sup = std::max(sup, std::abs(v));
    m.sup_norm = sup;
    m.breakpoints = x;
    m.eval = [x = std::move(x), values = std::move(values)](std::span<const double> p) {
        const double t = p[0];
        if (t <= x.front()) return values.front();
        if (t >= x.back()) return values.back();
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x.begin());
        const double u = (t - x[i - 1]) / (x[i] - x[i - 1]);
        return (1.0 - u) * values[i - 1] + u * values[i];
    };
    return m;
}

MultiplierSpec grid_multiplier_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("multiplier grid: cannot open '" + path + "'");
    std::vector<double> x;
    std::vector<Complex> v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto parts = split_args(t);
        if (parts.size() < 2 || parts.size() > 3)
            throw std::invalid_argument("multiplier grid: " + path + ":" + std::to_string(lineno) +
                                        ": expected x,re[,im]");
        x.push_back(parse_double(parts[0], "grid"));
        v.emplace_back(parse_double(parts[1], "grid"), parts.size() == 3 ? parse_double(parts[2], "grid") : 0.0);
    }
    MultiplierSpec m = grid_multiplier(std::move(x), std::move(v));
    m.label = "grid(" + path + ")";
    return m;
}

std::vector<std::string> multiplier_registry() {
    return {"constant", "modulation", "signum", "chirp43", "bump", "ripple", "grid", "from_symbol"};
}

MultiplierSpec parse_multiplier(std::string_view text) {
    text = trim(text);
    const std::size_t open = text.find('(');
    const std::string id(trim(text.substr(0, open)));
    std::string_view args;
    if (open != std::string_view::npos) {
        if (text.back() != ')') throw std::invalid_argument("multiplier '" + std::string(text) + "': missing ')'");
        args = trim(text.substr(open + 1, text.size() - open - 2));
    }
    auto no_args = [&](MultiplierSpec m) {
        if (!args.empty()) throw std::invalid_argument("multiplier " + id + " takes no arguments");
        return m;
    };
    if (id == "constant") {
        const auto a = split_args(args);
        if (args.empty() || a.size() > 2) throw std::invalid_argument("multiplier constant: expected constant(re[,im])");
        return constant_multiplier({parse_double(a[0], id), a.size() == 2 ? parse_double(a[1], id) : 0.0});
    }
    if (id == "modulation") {
        if (args.empty()) throw std::invalid_argument("multiplier modulation: expected modulation(c1[,c2,c3])");
        std::vector<double> c;
        for (auto a : split_args(args)) c.push_back(parse_double(a, id));
        return modulation_multiplier(std::move(c));
    }
    if (id == "signum") return no_args(signum_multiplier());
    if (id == "chirp43") return no_args(chirp43_multiplier());
    if (id == "bump") return no_args(bump_multiplier());
    if (id == "ripple") return no_args(ripple_multiplier());
    if (id == "grid") {
        if (args.empty()) throw std::invalid_argument("multiplier grid: expected grid(path)");
        return grid_multiplier_from_file(std::string(args));
    }
    if (id == "from_symbol") {
        if (args.empty()) throw std::invalid_argument("multiplier from_symbol: expected from_symbol(<multiplier>)");
        const MultiplierSpec inner = parse_multiplier(args);
        MultiplierSpec m = multiplier_from_symbol(symbol_from_multiplier(inner, inner.dim == 0 ? 1 : inner.dim));
        m.label = "from_symbol(" + inner.label + ")";
        return m;
    }
    throw std::invalid_argument("unknown multiplier id '" + id + "'");
}

}  // namespace focklab
