#include "focklab/operator_matrix.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "focklab/kernels.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

OperatorMatrix::OperatorMatrix(int dim, int truncation, Basis basis, double s_domain, double s_codomain)
    : indices_(IndexSet::get(dim, truncation)),
      data_(indices_->size() * indices_->size()),
      basis_(basis),
      s_domain_(s_domain),
      s_codomain_(s_codomain) {}

OperatorMatrix OperatorMatrix::identity(int dim, int truncation, Basis basis) {
    OperatorMatrix m(dim, truncation, basis);
    for (std::size_t i = 0; i < m.size(); ++i) m(i, i) = 1.0;
    return m;
}

OperatorMatrix OperatorMatrix::diagonal(int dim, int truncation, Basis basis, std::span<const Complex> entries) {
    OperatorMatrix m(dim, truncation, basis);
    if (entries.size() != m.size()) throw std::invalid_argument("OperatorMatrix::diagonal: wrong entry count");
    for (std::size_t i = 0; i < m.size(); ++i) m(i, i) = entries[i];
    return m;
}

OperatorMatrix OperatorMatrix::interior(int order) const {
    if (order > truncation()) throw std::invalid_argument("interior: order exceeds truncation");
    OperatorMatrix out(dim(), order, basis_, s_domain_, s_codomain_);
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
    return out;
}

SpectralVector OperatorMatrix::apply(const SpectralVector& v) const {
    if (v.dim() != dim() || v.truncation() != truncation())
        throw std::invalid_argument("OperatorMatrix::apply: vector shape mismatch");
    SpectralVector out(indices_, std::vector<Complex>(size()), basis_);
    kernels::active().cmatvec(data_.data(), size(), size(), v.coeffs().data(), out.coeffs().data());
    return out;
}

SpectralVector OperatorMatrix::apply_adjoint(const SpectralVector& v) const {
    if (v.dim() != dim() || v.truncation() != truncation())
        throw std::invalid_argument("OperatorMatrix::apply_adjoint: vector shape mismatch");
    SpectralVector out(indices_, std::vector<Complex>(size()), basis_);
    kernels::active().cmatvec_adjoint(data_.data(), size(), size(), v.coeffs().data(), out.coeffs().data());
    return out;
}

OperatorMatrix OperatorMatrix::adjoint() const {
    OperatorMatrix out(dim(), truncation(), basis_, s_codomain_, s_domain_);
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

double OperatorMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (const Complex& c : data_) acc += std::norm(c);
    return std::sqrt(acc);
}

void OperatorMatrix::require_compatible(const OperatorMatrix& other) const {
    if (other.dim() != dim() || other.truncation() != truncation())
        throw std::invalid_argument("OperatorMatrix: operands differ in dimension or truncation");
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(Complex factor) {
    for (Complex& c : data_) c *= factor;
    return *this;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    a.require_compatible(b);
    OperatorMatrix out(a.dim(), a.truncation(), a.basis(), b.s_domain(), a.s_codomain());
    const std::size_t n = a.size();
    parallel_for(n, [&](std::size_t i) {
        Complex* row = out.data_.data() + i * n;
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == 0.0) continue;
            const Complex* brow = b.data_.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j];
        }
    });
    return out;
}

double interior_distance(const OperatorMatrix& a, const OperatorMatrix& b, int order) {
    if (a.dim() != b.dim()) throw std::invalid_argument("interior_distance: dimension mismatch");
    if (order > a.truncation() || order > b.truncation())
        throw std::invalid_argument("interior_distance: order exceeds a truncation");
    const std::size_t k = a.indices().prefix_size(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) acc += std::norm(a(i, j) - b(i, j));
    return std::sqrt(acc);
}

double unitarity_defect(const OperatorMatrix& a, int order) {
    const std::size_t k = a.indices().prefix_size(order);
    const std::size_t n = a.size();
    double acc = 0.0;
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q) {
            Complex g = 0.0;
            for (std::size_t i = 0; i < n; ++i) g += std::conj(a(i, p)) * a(i, q);
            if (p == q) g -= 1.0;
            acc += std::norm(g);
        }
    return std::sqrt(acc);
}

OperatorNormResult spectral_norm(std::span<const Complex> b, std::size_t rows, std::size_t cols,
                                 const PowerIterationOptions& options) {
    if (b.size() != rows * cols) throw std::invalid_argument("spectral_norm: size mismatch");
    double frob = 0.0;
    for (const Complex& c : b) frob += std::norm(c);
    OperatorNormResult r;
    r.upper = std::sqrt(frob);
    if (r.upper == 0.0) {
        r.converged = true;
        return r;
    }
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    std::vector<Complex> x(cols), y(rows), z(cols);
    for (Complex& c : x) c = {normal(rng), normal(rng)};
    auto normalize = [](std::vector<Complex>& v) {
        double acc = 0.0;
        for (const Complex& c : v) acc += std::norm(c);
        const double nv = std::sqrt(acc);
        for (Complex& c : v) c /= nv;
        return nv;
    };
    normalize(x);
    const auto& k = kernels::active();
    double theta = 0.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
        k.cmatvec(b.data(), rows, cols, x.data(), y.data());
        double yy = 0.0;
        for (const Complex& c : y) yy += std::norm(c);
        const double next = yy;  // x^* B^* B x with |x| = 1
        k.cmatvec_adjoint(b.data(), rows, cols, y.data(), z.data());
        x.swap(z);
        const double nz = normalize(x);
        r.iterations = it;
        if (nz == 0.0) {
            theta = 0.0;
            r.converged = true;
            break;
        }
        if (it > 1 && std::abs(next - theta) <= options.tolerance * next) {
            theta = next;
            r.converged = true;
            break;
        }
        theta = next;
    }
    r.value = std::sqrt(theta);
    r.lower = r.value;
    return r;
}

OperatorNormResult operator_norm(const OperatorMatrix& a, double s, const PowerIterationOptions& options) {
    const std::size_t n = a.size();
    // B = D^{s/2} A D^{-s/2}
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = std::pow(2.0 * a.indices()[i].order() + a.dim(), s / 2.0);
    std::vector<Complex> b(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i * n + j] = d[i] * a(i, j) / d[j];
    return spectral_norm(b, n, n, options);
}

// ---- serialization ----

namespace {

constexpr char kMagic[16] = {'F', 'O', 'C', 'K', 'L', 'A', 'B', '-', 'M', 'A', 'T', 0, 0, 0, 0, 0};

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put_le(std::ostream& os, T value) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is, const std::filesystem::path& path) {
    unsigned char bytes[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T)))
        throw std::runtime_error(path.string() + ": truncated matrix file");
    if constexpr (std::endian::native == std::endian::big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    T value;
    std::memcpy(&value, bytes, sizeof(T));
    return value;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ofstream os(path, mode);
    if (!os) throw std::runtime_error(path.string() + ": cannot open for writing");
    return os;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode) {
    std::ifstream is(path, mode);
    if (!is) throw std::runtime_error(path.string() + ": cannot open for reading");
    return is;
}

Basis basis_from_code(unsigned code, const std::filesystem::path& path) {
    if (code > 2) throw std::runtime_error(path.string() + ": unknown convention code " + std::to_string(code));
    return static_cast<Basis>(code);
}

void check_shape(std::uint32_t n, std::uint32_t N, const std::filesystem::path& path) {
    if (n < 1 || n > static_cast<std::uint32_t>(kMaxDim) || N > 4096)
        throw std::runtime_error(path.string() + ": implausible header (n=" + std::to_string(n) +
                                 ", N=" + std::to_string(N) + ")");
}

}  // namespace

void write_binary(const OperatorMatrix& m, const std::filesystem::path& path) {
    std::ofstream os = open_out(path, std::ios::binary | std::ios::trunc);
    os.write(kMagic, sizeof(kMagic));
    put_le<std::uint32_t>(os, kMatrixFormatVersion);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.dim()));
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(m.truncation()));
    put_le<double>(os, m.s_domain());
    put_le<double>(os, m.s_codomain());
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(m.basis()));
    for (const Complex& c : m.data()) {
        put_le<double>(os, c.real());
        put_le<double>(os, c.imag());
    }
    if (!os) throw std::runtime_error(path.string() + ": write failed");
}

OperatorMatrix read_binary(const std::filesystem::path& path) {
    std::ifstream is = open_in(path, std::ios::binary);
    char magic[16];
    if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error(path.string() + ": not a focklab matrix file (bad magic)");
    const auto version = get_le<std::uint32_t>(is, path);
    if (version != kMatrixFormatVersion)
        throw std::runtime_error(path.string() + ": unsupported format version " + std::to_string(version));
    const auto n = get_le<std::uint32_t>(is, path);
    const auto N = get_le<std::uint32_t>(is, path);
    check_shape(n, N, path);
    const double sd = get_le<double>(is, path);
    const double sc = get_le<double>(is, path);
    const Basis basis = basis_from_code(get_le<std::uint8_t>(is, path), path);
    OperatorMatrix m(static_cast<int>(n), static_cast<int>(N), basis, sd, sc);
    for (Complex& c : m.data()) {
        const double re = get_le<double>(is, path);
        const double im = get_le<double>(is, path);
        c = {re, im};
    }
    if (is.peek() != std::char_traits<char>::eof()) throw std::runtime_error(path.string() + ": trailing bytes");
    return m;
}

void write_csv(const OperatorMatrix& m, const std::filesystem::path& path) {
    std::ofstream os = open_out(path, std::ios::trunc);
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return std::string(buf);
    };
    os << "# focklab-matrix version=" << kMatrixFormatVersion << "\n";
    os << "# n=" << m.dim() << "\n# N=" << m.truncation() << "\n";
    os << "# s_domain=" << num(m.s_domain()) << "\n# s_codomain=" << num(m.s_codomain()) << "\n";
    os << "# convention=" << basis_name(m.basis()) << "\n";
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) os << ',';
            os << num(m(i, j).real()) << ',' << num(m(i, j).imag());
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error(path.string() + ": write failed");
}

OperatorMatrix read_csv(const std::filesystem::path& path) {
    std::ifstream is = open_in(path, std::ios::in);
    std::string line;
    int n = 0, N = -1;
    double sd = 0.0, sc = 0.0;
    Basis basis = Basis::fock;
    bool have_basis = false;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(1, eq - 1);
            key.erase(0, key.find_first_not_of(' '));
            const std::string value = line.substr(eq + 1);
            if (key == "n") n = std::stoi(value);
            else if (key == "N") N = std::stoi(value);
            else if (key == "s_domain") sd = std::stod(value);
            else if (key == "s_codomain") sc = std::stod(value);
            else if (key == "convention") {
                basis = parse_basis(value);
                have_basis = true;
            }
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) values.push_back(std::stod(cell));
    }
    if (n < 1 || N < 0 || !have_basis) throw std::runtime_error(path.string() + ": incomplete CSV header");
    check_shape(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(N), path);
    OperatorMatrix m(n, N, basis, sd, sc);
    if (values.size() != 2 * m.data().size())
        throw std::runtime_error(path.string() + ": expected " + std::to_string(2 * m.data().size()) +
                                 " numbers, found " + std::to_string(values.size()));
    for (std::size_t i = 0; i < m.data().size(); ++i) m.data()[i] = {values[2 * i], values[2 * i + 1]};
    return m;
}

}  // namespace focklab
