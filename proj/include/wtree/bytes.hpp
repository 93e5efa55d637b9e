#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wtree {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

/// Thrown when a serialized artifact (diagram, tree, witness, certificate)
/// cannot be parsed: bad magic, truncation, trailing bytes, bad field values.
class CodecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hex);  // throws CodecError on odd length / non-hex

void put_u8(Bytes& out, std::uint8_t v);
void put_u16be(Bytes& out, std::uint16_t v);
void put_u32be(Bytes& out, std::uint32_t v);
void put_u64be(Bytes& out, std::uint64_t v);

/// Bounds-checked cursor over a byte buffer. Every read throws CodecError
/// past the end; finish() throws if bytes remain.
class ByteReader {
public:
    explicit ByteReader(BytesView data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16be();
    std::uint32_t u32be();
    std::uint64_t u64be();
    Bytes bytes(std::size_t len);
    void expect_magic(std::string_view magic);
    std::size_t remaining() const { return data_.size() - pos_; }
    void finish() const;

private:
    BytesView data_;
    std::size_t pos_ = 0;
};

}  // namespace wtree
