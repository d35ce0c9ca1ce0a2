#include "vnm/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace vnm::io {
namespace {

constexpr std::uint32_t kVnmVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), bytes.size())) {
        throw Error(ErrorCode::Io, "unexpected end of stream");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

void put_magic(std::ostream& out, const char (&magic)[5]) { out.write(magic, 4); }

void expect_magic(std::istream& in, const char (&magic)[5]) {
    std::array<char, 4> got{};
    if (!in.read(got.data(), got.size())) {
        throw Error(ErrorCode::Io, "unexpected end of stream reading magic");
    }
    if (std::memcmp(got.data(), magic, 4) != 0) {
        throw Error(ErrorCode::BadFormat, std::string("expected magic ") + magic);
    }
}

// Rejects headers that promise more payload than the stream holds, before
// allocating for them.
void require_available(std::istream& in, std::uint64_t bytes) {
    const auto here = in.tellg();
    if (here < 0) return;
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(here);
    if (end >= 0 && static_cast<std::uint64_t>(end - here) < bytes) {
        throw Error(ErrorCode::Io, "truncated payload");
    }
}

std::uint32_t checked_u32(Index value, const char* what) {
    if (value < 0 || value > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " does not fit in u32");
    }
    return static_cast<std::uint32_t>(value);
}

Dtype parse_dtype(std::uint8_t raw) {
    if (raw > 1) throw Error(ErrorCode::BadFormat, "unknown dtype " + std::to_string(raw));
    return static_cast<Dtype>(raw);
}

void check_written(const std::ostream& out) {
    if (!out) throw Error(ErrorCode::Io, "write failed");
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot create " + path.string());
    return out;
}

}  // namespace

std::size_t values_bytes(const VnmMatrix& s) { return s.value_count() * sizeof(float); }
std::size_t metadata_bytes(std::size_t value_count) { return (value_count + 3) / 4; }
std::size_t column_loc_bytes(std::size_t column_loc_count) {
    return column_loc_count * sizeof(std::uint16_t);
}

void write_dense(std::ostream& out, const DenseMatrix& d, Dtype dtype) {
    put_magic(out, "DMX1");
    put(out, checked_u32(d.rows(), "rows"));
    put(out, checked_u32(d.cols(), "cols"));
    put(out, static_cast<std::uint8_t>(dtype));
    for (Index i = 0; i < d.size(); ++i) put(out, d.data()[i]);
    check_written(out);
}

DenseFile read_dense(std::istream& in) {
    expect_magic(in, "DMX1");
    const auto rows = get<std::uint32_t>(in);
    const auto cols = get<std::uint32_t>(in);
    DenseFile file;
    file.dtype = parse_dtype(get<std::uint8_t>(in));
    require_available(in, std::uint64_t{rows} * cols * sizeof(float));
    file.matrix.resize(rows, cols);
    for (Index i = 0; i < file.matrix.size(); ++i) file.matrix.data()[i] = get<float>(in);
    if (!file.matrix.allFinite()) throw Error(ErrorCode::NonFinite, "DMX1 payload has NaN/Inf");
    return file;
}

void write_vnm(std::ostream& out, const VnmMatrix& s) {
    validate_structure(s);
    put_magic(out, "VNM1");
    put(out, kVnmVersion);
    put(out, checked_u32(s.r, "r"));
    put(out, checked_u32(s.k, "k"));
    put(out, static_cast<std::uint32_t>(s.cfg.v));
    put(out, static_cast<std::uint32_t>(s.cfg.n));
    put(out, static_cast<std::uint32_t>(s.cfg.m));
    put(out, static_cast<std::uint8_t>(s.dtype));
    for (float value : s.values) put(out, value);
    for (std::size_t i = 0; i < s.m_indices.size(); i += 4) {
        std::uint8_t packed = 0;
        for (std::size_t j = 0; j < 4 && i + j < s.m_indices.size(); ++j) {
            packed |= static_cast<std::uint8_t>((s.m_indices[i + j] & 0x3u) << (2 * j));
        }
        put(out, packed);
    }
    for (std::uint16_t col : s.column_loc) put(out, col);
    check_written(out);
}

VnmMatrix read_vnm(std::istream& in) {
    expect_magic(in, "VNM1");
    const auto version = get<std::uint32_t>(in);
    if (version != kVnmVersion) {
        throw Error(ErrorCode::BadFormat, "unsupported VNM1 version " + std::to_string(version));
    }
    VnmMatrix s;
    s.r = get<std::uint32_t>(in);
    s.k = get<std::uint32_t>(in);
    const auto v = get<std::uint32_t>(in);
    const auto n = get<std::uint32_t>(in);
    const auto m = get<std::uint32_t>(in);
    s.dtype = parse_dtype(get<std::uint8_t>(in));
    if (v == 0 || v > std::numeric_limits<int>::max() || n != 2 || m < kSelectedColumns ||
        m > std::numeric_limits<int>::max() || s.r % v != 0 || s.k % m != 0) {
        throw Error(ErrorCode::CorruptMetadata, "invalid VNM1 header shape");
    }
    s.cfg = VnmConfig{static_cast<int>(v), static_cast<int>(n), static_cast<int>(m)};

    const std::size_t count = s.value_count();
    require_available(in, count * sizeof(float) + metadata_bytes(count) +
                              column_loc_bytes(s.column_loc_count()));
    s.values.resize(count);
    for (auto& value : s.values) value = get<float>(in);
    s.m_indices.resize(count);
    for (std::size_t i = 0; i < count; i += 4) {
        const auto packed = get<std::uint8_t>(in);
        for (std::size_t j = 0; j < 4 && i + j < count; ++j) {
            s.m_indices[i + j] = static_cast<std::uint8_t>((packed >> (2 * j)) & 0x3u);
        }
    }
    s.column_loc.resize(s.column_loc_count());
    for (auto& col : s.column_loc) col = get<std::uint16_t>(in);

    validate_structure(s);
    for (float value : s.values) {
        if (!std::isfinite(value)) throw Error(ErrorCode::NonFinite, "VNM1 values have NaN/Inf");
    }
    return s;
}

void write_mask(std::ostream& out, const SparsityMask& mask) {
    put_magic(out, "MSK1");
    put(out, checked_u32(mask.rows(), "rows"));
    put(out, checked_u32(mask.cols(), "cols"));
    const Index total = mask.size();
    for (Index i = 0; i < total; i += 8) {
        std::uint8_t packed = 0;
        for (Index b = 0; b < 8 && i + b < total; ++b) {
            if (mask.data()[i + b]) packed |= static_cast<std::uint8_t>(1u << b);
        }
        put(out, packed);
    }
    check_written(out);
}

SparsityMask read_mask(std::istream& in) {
    expect_magic(in, "MSK1");
    const auto rows = get<std::uint32_t>(in);
    const auto cols = get<std::uint32_t>(in);
    const std::uint64_t total = std::uint64_t{rows} * cols;
    require_available(in, (total + 7) / 8);
    SparsityMask mask(rows, cols);
    for (std::uint64_t i = 0; i < total; i += 8) {
        const auto packed = get<std::uint8_t>(in);
        for (std::uint64_t b = 0; b < 8 && i + b < total; ++b) {
            mask.data()[i + b] = ((packed >> b) & 1u) != 0;
        }
    }
    return mask;
}

void write_dense(const std::filesystem::path& path, const DenseMatrix& d, Dtype dtype) {
    auto out = open_out(path);
    write_dense(out, d, dtype);
}

DenseFile read_dense(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_dense(in);
}

void write_vnm(const std::filesystem::path& path, const VnmMatrix& s) {
    auto out = open_out(path);
    write_vnm(out, s);
}

VnmMatrix read_vnm(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_vnm(in);
}

void write_mask(const std::filesystem::path& path, const SparsityMask& mask) {
    auto out = open_out(path);
    write_mask(out, mask);
}

SparsityMask read_mask(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_mask(in);
}

}  // namespace vnm::io
