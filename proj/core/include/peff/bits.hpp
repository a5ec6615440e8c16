#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace peff {

/// A bit string. Bits are addressed 0..size()-1 in emission order; the hex
/// serialization is MSB-first per nibble and carries an explicit bit length
/// ("<len>:<hex>") so strings that are not a whole number of bytes round-trip.
class Bits {
public:
    Bits() = default;
    explicit Bits(std::vector<bool> v) : bits_(std::move(v)) {}

    static Bits fromString(const std::string& zeroOnes);  // "0101..."
    static Bits fromAscii(const std::string& text);       // 8 bits per char, MSB first
    static Bits fromHexLen(const std::string& encoded);   // "<len>:<hex>"
    static Bits ones(std::size_t n);
    static Bits zeros(std::size_t n);

    std::size_t size() const { return bits_.size(); }
    bool empty() const { return bits_.empty(); }
    bool at(std::size_t i) const { return bits_[i]; }

    void push(bool b) { bits_.push_back(b); }
    void append(const Bits& other);
    void appendAscii(const std::string& text);
    void clear() { bits_.clear(); }

    Bits slice(std::size_t from, std::size_t len) const;
    Bits reversed() const;

    /// Decodes 8-bit groups to chars; empty result if size is not a multiple of 8.
    bool toAscii(std::string& out) const;

    std::string toString() const;  // "0101..."
    std::string toHexLen() const;

    bool operator==(const Bits& o) const { return bits_ == o.bits_; }
    bool operator!=(const Bits& o) const { return bits_ != o.bits_; }

    /// Length-then-lexicographic order ("0" < "1", shorter first).
    static bool lengthLexLess(const Bits& a, const Bits& b);

    std::uint64_t fnv1a(std::uint64_t seed = 14695981039346656037ULL) const;

private:
    std::vector<bool> bits_;
};

/// Cursor over a Bits value for operand decoding.
class BitReader {
public:
    explicit BitReader(const Bits& b) : bits_(&b) {}

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return bits_->size() - pos_; }
    bool done() const { return pos_ >= bits_->size(); }

    /// Reads n bits MSB-first into value. False if not enough bits (cursor unchanged).
    bool readUint(int n, std::uint64_t& value);

    /// Elias gamma code for integers >= 1. False on malformed/truncated input.
    bool readGamma(std::uint64_t& value);

    bool readBit(bool& b);
    bool readBits(std::size_t n, Bits& out);

private:
    const Bits* bits_;
    std::size_t pos_ = 0;
};

void appendUint(Bits& out, std::uint64_t value, int nbits);
void appendGamma(Bits& out, std::uint64_t value);  // value >= 1
std::size_t gammaLength(std::uint64_t value);

/// Smallest k with 2^k >= v; ceilLog2(0) and ceilLog2(1) are 0.
int ceilLog2(std::uint64_t v);

}  // namespace peff
