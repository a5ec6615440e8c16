#include "peff/bits.hpp"

#include <stdexcept>

namespace peff {

Bits Bits::fromString(const std::string& zeroOnes) {
    Bits b;
    b.bits_.reserve(zeroOnes.size());
    for (char c : zeroOnes) {
        if (c == '0')
            b.bits_.push_back(false);
        else if (c == '1')
            b.bits_.push_back(true);
        else
            throw std::invalid_argument("bit string may contain only 0 and 1");
    }
    return b;
}

Bits Bits::fromAscii(const std::string& text) {
    Bits b;
    b.appendAscii(text);
    return b;
}

Bits Bits::ones(std::size_t n) { return Bits(std::vector<bool>(n, true)); }
Bits Bits::zeros(std::size_t n) { return Bits(std::vector<bool>(n, false)); }

void Bits::append(const Bits& other) {
    bits_.insert(bits_.end(), other.bits_.begin(), other.bits_.end());
}

void Bits::appendAscii(const std::string& text) {
    bits_.reserve(bits_.size() + 8 * text.size());
    for (unsigned char c : text)
        for (int i = 7; i >= 0; --i) bits_.push_back((c >> i) & 1);
}

Bits Bits::slice(std::size_t from, std::size_t len) const {
    if (from + len > bits_.size()) throw std::out_of_range("Bits::slice");
    Bits out;
    out.bits_.assign(bits_.begin() + from, bits_.begin() + from + len);
    return out;
}

Bits Bits::reversed() const {
    Bits out;
    out.bits_.assign(bits_.rbegin(), bits_.rend());
    return out;
}

bool Bits::toAscii(std::string& out) const {
    if (bits_.size() % 8 != 0) return false;
    out.clear();
    out.reserve(bits_.size() / 8);
    for (std::size_t i = 0; i < bits_.size(); i += 8) {
        unsigned char c = 0;
        for (int j = 0; j < 8; ++j) c = static_cast<unsigned char>((c << 1) | (bits_[i + j] ? 1 : 0));
        out.push_back(static_cast<char>(c));
    }
    return true;
}

std::string Bits::toString() const {
    std::string s;
    s.reserve(bits_.size());
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

std::string Bits::toHexLen() const {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    for (std::size_t i = 0; i < bits_.size(); i += 4) {
        int nib = 0;
        for (std::size_t j = 0; j < 4; ++j) {
            nib <<= 1;
            if (i + j < bits_.size() && bits_[i + j]) nib |= 1;
        }
        hex.push_back(digits[nib]);
    }
    return std::to_string(bits_.size()) + ":" + hex;
}

Bits Bits::fromHexLen(const std::string& encoded) {
    auto colon = encoded.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected <len>:<hex>");
    std::size_t len = std::stoull(encoded.substr(0, colon));
    std::string hex = encoded.substr(colon + 1);
    if (hex.size() != (len + 3) / 4) throw std::invalid_argument("hex length does not match bit length");
    Bits b;
    b.bits_.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        char c = hex[i / 4];
        int nib;
        if (c >= '0' && c <= '9')
            nib = c - '0';
        else if (c >= 'a' && c <= 'f')
            nib = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            nib = c - 'A' + 10;
        else
            throw std::invalid_argument("bad hex digit");
        b.bits_.push_back((nib >> (3 - (i % 4))) & 1);
    }
    // Trailing padding bits of the final nibble must be zero.
    for (std::size_t i = len; i < hex.size() * 4; ++i) {
        char c = hex[i / 4];
        int nib = (c >= 'a') ? c - 'a' + 10 : (c >= 'A') ? c - 'A' + 10 : c - '0';
        if ((nib >> (3 - (i % 4))) & 1) throw std::invalid_argument("nonzero padding in hex encoding");
    }
    return b;
}

bool Bits::lengthLexLess(const Bits& a, const Bits& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.bits_ < b.bits_;
}

std::uint64_t Bits::fnv1a(std::uint64_t seed) const {
    std::uint64_t h = seed;
    auto mix = [&h](std::uint64_t byte) {
        h ^= byte;
        h *= 1099511628211ULL;
    };
    mix(bits_.size() & 0xff);
    mix((bits_.size() >> 8) & 0xff);
    unsigned acc = 0;
    int n = 0;
    for (bool b : bits_) {
        acc = (acc << 1) | (b ? 1 : 0);
        if (++n == 8) {
            mix(acc);
            acc = 0;
            n = 0;
        }
    }
    if (n > 0) mix(acc | (1u << n));
    return h;
}

bool BitReader::readUint(int n, std::uint64_t& value) {
    if (remaining() < static_cast<std::size_t>(n)) return false;
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v = (v << 1) | (bits_->at(pos_ + i) ? 1 : 0);
    pos_ += n;
    value = v;
    return true;
}

bool BitReader::readGamma(std::uint64_t& value) {
    std::size_t p = pos_;
    std::size_t zeros = 0;
    while (p < bits_->size() && !bits_->at(p)) {
        ++zeros;
        ++p;
    }
    if (p >= bits_->size() || zeros > 62) return false;
    // p points at the leading 1 of the binary payload; zeros more bits follow.
    if (p + zeros >= bits_->size()) return false;
    std::uint64_t v = 1;
    for (std::size_t i = 1; i <= zeros; ++i) v = (v << 1) | (bits_->at(p + i) ? 1 : 0);
    pos_ = p + zeros + 1;
    value = v;
    return true;
}

bool BitReader::readBit(bool& b) {
    if (done()) return false;
    b = bits_->at(pos_++);
    return true;
}

bool BitReader::readBits(std::size_t n, Bits& out) {
    if (remaining() < n) return false;
    out = bits_->slice(pos_, n);
    pos_ += n;
    return true;
}

void appendUint(Bits& out, std::uint64_t value, int nbits) {
    for (int i = nbits - 1; i >= 0; --i) out.push((value >> i) & 1);
}

void appendGamma(Bits& out, std::uint64_t value) {
    if (value == 0) throw std::invalid_argument("gamma code requires value >= 1");
    int k = 0;
    while ((value >> (k + 1)) != 0) ++k;  // k = floor(log2(value))
    for (int i = 0; i < k; ++i) out.push(false);
    appendUint(out, value, k + 1);
}

std::size_t gammaLength(std::uint64_t value) {
    int k = 0;
    while ((value >> (k + 1)) != 0) ++k;
    return 2 * static_cast<std::size_t>(k) + 1;
}

int ceilLog2(std::uint64_t v) {
    if (v <= 1) return 0;
    int k = 0;
    std::uint64_t p = 1;
    while (p < v) {
        p <<= 1;
        ++k;
        if (k >= 64) break;
    }
    return k;
}

}  // namespace peff
