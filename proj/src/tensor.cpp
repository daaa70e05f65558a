#include "adapnet/tensor.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "adapnet/errors.hpp"

namespace adapnet {

Tensor::Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    for (const std::size_t e : shape) {
        if (e == 0) throw ShapeError("Tensor: zero extent in shape " + shape_str());
    }
    data.assign(shape_product(shape), 0.0);
}

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (const std::size_t e : shape) n *= e;
    return n;
}

std::string Tensor::shape_str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << "x";
        os << shape[i];
    }
    return os.str();
}

void Tensor::check_finite(const char* where) const {
    for (const double v : data) {
        if (!std::isfinite(v)) {
            throw NumericError(std::string(where) + ": non-finite value in tensor " +
                               shape_str());
        }
    }
}

namespace {
constexpr char kMagic[4] = {'A', 'D', 'P', 'T'};
constexpr std::uint8_t kVersion = 1;

void write_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}
} // namespace

void save_tensor(std::ostream& os, const Tensor& t) {
    os.write(kMagic, 4);
    os.put(static_cast<char>(kVersion));
    os.put(static_cast<char>(t.rank()));
    for (const std::size_t e : t.shape) write_u64(os, e);
    for (const double v : t.data) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        write_u64(os, bits);
    }
}

Tensor load_tensor(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("tensor load: bad magic");
    const int version = is.get();
    if (version != kVersion)
        throw DataError("tensor load: unsupported version " + std::to_string(version));
    const int rank = is.get();
    if (rank < 0 || rank > 32) throw DataError("tensor load: bad rank");
    std::vector<std::size_t> shape(static_cast<std::size_t>(rank));
    for (auto& e : shape) e = static_cast<std::size_t>(read_u64(is));
    Tensor t(shape);
    for (double& v : t.data) {
        const std::uint64_t bits = read_u64(is);
        std::memcpy(&v, &bits, 8);
    }
    if (!is) throw DataError("tensor load: truncated stream");
    return t;
}

void save_tensor_file(const std::filesystem::path& path, const Tensor& t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for write: " + path.string());
    save_tensor(os, t);
    if (!os) throw DataError("write failed: " + path.string());
}

Tensor load_tensor_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open for read: " + path.string());
    return load_tensor(is);
}

} // namespace adapnet
