#pragma once

#include "vnm/format.hpp"

#include <filesystem>
#include <iosfwd>

namespace vnm::io {

// Little-endian binary containers.
//
//   DMX1: "DMX1" u32 rows u32 cols u8 dtype, then rows*cols f32
//   VNM1: "VNM1" u32 version(=1) u32 r k v n m u8 dtype, then values f32,
//         m_indices packed 4 per byte (code i in bits 2i..2i+1), column_loc u16
//   MSK1: "MSK1" u32 rows u32 cols, then keep bits row-major, LSB first
//
// Malformed content throws BadFormat (or CorruptMetadata for VNM1 payloads);
// stream failures and truncation throw Io.

struct DenseFile {
    DenseMatrix matrix;
    Dtype dtype = Dtype::Real32;
};

void write_dense(std::ostream& out, const DenseMatrix& d, Dtype dtype = Dtype::Real32);
DenseFile read_dense(std::istream& in);

void write_vnm(std::ostream& out, const VnmMatrix& s);
VnmMatrix read_vnm(std::istream& in);

void write_mask(std::ostream& out, const SparsityMask& mask);
SparsityMask read_mask(std::istream& in);

void write_dense(const std::filesystem::path& path, const DenseMatrix& d,
                 Dtype dtype = Dtype::Real32);
DenseFile read_dense(const std::filesystem::path& path);
void write_vnm(const std::filesystem::path& path, const VnmMatrix& s);
VnmMatrix read_vnm(const std::filesystem::path& path);
void write_mask(const std::filesystem::path& path, const SparsityMask& mask);
SparsityMask read_mask(const std::filesystem::path& path);

/// Serialized sizes in bytes of each VNM1 payload section.
std::size_t values_bytes(const VnmMatrix& s);
std::size_t metadata_bytes(std::size_t value_count);
std::size_t column_loc_bytes(std::size_t column_loc_count);

}  // namespace vnm::io
