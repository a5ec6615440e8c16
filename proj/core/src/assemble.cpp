#include <cctype>
#include <stdexcept>
#include <vector>

#include "peff/machine.hpp"

namespace peff {

namespace {

std::vector<std::string> tokenize(const std::string& source) {
    std::vector<std::string> tokens;
    std::string current;
    bool comment = false;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (char c : source) {
        if (c == '\n') {
            comment = false;
            flush();
            continue;
        }
        if (comment) continue;
        if (c == '#') {
            comment = true;
            flush();
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c)) || c == ';') {
            flush();
            continue;
        }
        if (c == '{' || c == '}') {
            flush();
            tokens.push_back(std::string(1, c));
            continue;
        }
        current.push_back(c);
    }
    flush();
    return tokens;
}

std::uint64_t parseCount(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("expected a number");
    std::uint64_t v = 0;
    for (char c : token) {
        if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad number: " + token);
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
        if (v > (1ULL << 40)) throw std::invalid_argument("operand out of range: " + token);
    }
    return v;
}

Bits parsePayload(const std::string& token) {
    if (token == "-") return Bits{};
    return Bits::fromString(token);  // throws on anything but 0/1
}

struct Assembler {
    const std::vector<std::string>& tokens;
    std::size_t pos = 0;

    bool done() const { return pos >= tokens.size(); }
    const std::string& peek() const { return tokens[pos]; }
    std::string take() {
        if (done()) throw std::invalid_argument("unexpected end of source");
        return tokens[pos++];
    }

    Bits block() {
        if (take() != "{") throw std::invalid_argument("expected '{'");
        Bits body = sequence(true);
        if (take() != "}") throw std::invalid_argument("expected '}'");
        return body;
    }

    Bits sequence(bool insideBlock) {
        Bits code;
        while (!done() && peek() != "}") {
            std::string mnemonic = take();
            if (mnemonic == "halt") {
                appendUint(code, 0, 4);
            } else if (mnemonic == "emit") {
                Bits payload = parsePayload(take());
                appendUint(code, 1, 4);
                appendGamma(code, payload.size() + 1);
                code.append(payload);
            } else if (mnemonic == "print") {
                code.append(printProgramFor(parsePayload(take())).code);
            } else if (mnemonic == "ones" || mnemonic == "zeros") {
                appendUint(code, mnemonic == "ones" ? 2 : 3, 4);
                appendGamma(code, parseCount(take()) + 1);
            } else if (mnemonic == "copyin") {
                appendUint(code, 4, 4);
            } else if (mnemonic == "repeat") {
                std::uint64_t k = parseCount(take());
                Bits payload = parsePayload(take());
                appendUint(code, 5, 4);
                appendGamma(code, k + 1);
                appendGamma(code, payload.size() + 1);
                code.append(payload);
            } else if (mnemonic == "pipe") {
                Bits first = block();
                Bits second = block();
                appendUint(code, 6, 4);
                appendGamma(code, first.size() + 1);
                code.append(first);
                code.append(second);
            } else if (mnemonic == "ttproof") {
                appendUint(code, 7, 4);
            } else if (mnemonic == "resproof") {
                appendUint(code, 8, 4);
            } else if (mnemonic == "erproof") {
                appendUint(code, 9, 4);
            } else if (mnemonic == "traceproof") {
                appendUint(code, 10, 4);
            } else if (mnemonic == "phpgen" || mnemonic == "phptaut") {
                std::uint64_t n = parseCount(take());
                if (n < 1) throw std::invalid_argument("pigeonhole index must be at least 1");
                appendUint(code, mnemonic == "phpgen" ? 11 : 12, 4);
                appendGamma(code, n);
            } else if (mnemonic == "raw") {
                code.append(parsePayload(take()));
            } else {
                throw std::invalid_argument("unknown mnemonic: " + mnemonic);
            }
        }
        if (!insideBlock && !done()) throw std::invalid_argument("unexpected '}'");
        return code;
    }
};

}  // namespace

Program assemble(const std::string& source) {
    std::vector<std::string> tokens = tokenize(source);
    Assembler as{tokens};
    Bits code = as.sequence(false);
    if (!as.done()) throw std::invalid_argument("unexpected trailing tokens");
    return Program{std::move(code)};
}

}  // namespace peff
