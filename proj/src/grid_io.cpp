#include "qvortex/grid_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>

namespace qvx {

namespace {

constexpr char kMagic[4] = {'Q', 'V', 'G', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint8_t kDtypeComplexF64 = 0;

void put_u32(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                                static_cast<unsigned char>((v >> 8) & 0xff),
                                static_cast<unsigned char>((v >> 16) & 0xff),
                                static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

bool get_u32(std::istream& is, std::uint32_t& v) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
    v = std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
        (std::uint32_t(b[3]) << 24);
    return true;
}

bool get_f64(std::istream& is, double& d) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    d = std::bit_cast<double>(v);
    return true;
}

}  // namespace

void write_grid(const ComplexGrid3& g, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(IoReason::open_failed, "write_grid: cannot open " + path);

    os.write(kMagic, 4);
    put_u32(os, kVersion);
    for (int a = 0; a < 3; ++a) put_u32(os, g.spec().dims[a]);
    for (int a = 0; a < 3; ++a) put_f64(os, g.spec().origin[a]);
    for (int a = 0; a < 3; ++a) put_f64(os, g.spec().spacing[a]);
    os.put(char(kDtypeComplexF64));
    for (const auto& v : g.values()) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    os.flush();
    if (!os) throw IoError(IoReason::write_failed, "write_grid: write failed for " + path);
}

ComplexGrid3 read_grid(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError(IoReason::open_failed, "read_grid: cannot open " + path);

    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw IoError(IoReason::bad_magic, "read_grid: bad magic in " + path);

    std::uint32_t version = 0;
    if (!get_u32(is, version))
        throw IoError(IoReason::truncated_payload, "read_grid: truncated header in " + path);
    if (version != kVersion)
        throw IoError(IoReason::bad_version, "read_grid: unsupported version in " + path);

    GridSpec spec;
    for (int a = 0; a < 3; ++a)
        if (!get_u32(is, spec.dims[a]))
            throw IoError(IoReason::truncated_payload, "read_grid: truncated header in " + path);

    const std::uint64_t total =
        std::uint64_t(spec.dims[0]) * spec.dims[1] * spec.dims[2];
    if (spec.dims[0] < 4 || spec.dims[1] < 4 || spec.dims[2] < 4 ||
        total > (std::uint64_t(1) << 40))
        throw IoError(IoReason::dims_overflow, "read_grid: implausible dimensions in " + path);

    for (int a = 0; a < 3; ++a)
        if (!get_f64(is, spec.origin[a]))
            throw IoError(IoReason::truncated_payload, "read_grid: truncated header in " + path);
    for (int a = 0; a < 3; ++a)
        if (!get_f64(is, spec.spacing[a]))
            throw IoError(IoReason::truncated_payload, "read_grid: truncated header in " + path);

    const int dtype = is.get();
    if (dtype == std::istream::traits_type::eof())
        throw IoError(IoReason::truncated_payload, "read_grid: truncated header in " + path);
    if (dtype != kDtypeComplexF64)
        throw IoError(IoReason::malformed, "read_grid: unknown dtype in " + path);

    std::vector<cdouble> values;
    values.resize(std::size_t(total));
    for (auto& v : values) {
        double re, im;
        if (!get_f64(is, re) || !get_f64(is, im))
            throw IoError(IoReason::truncated_payload,
                          "read_grid: payload shorter than header dims in " + path);
        v = cdouble(re, im);
    }
    if (is.peek() != std::istream::traits_type::eof())
        throw IoError(IoReason::malformed, "read_grid: trailing bytes in " + path);

    try {
        spec.validate();
    } catch (const Error& e) {
        throw IoError(IoReason::malformed, std::string("read_grid: ") + e.what());
    }
    return ComplexGrid3(spec, std::move(values));
}

}  // namespace qvx
