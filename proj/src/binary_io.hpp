#pragma once

#include "morphkit/error.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

namespace morphkit::detail {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
        std::reverse(bytes.begin(), bytes.end());
        return std::bit_cast<T>(bytes);
    }
}

template <class T>
void put(std::ostream& out, T v) {
    v = to_little(v);
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& in, const std::string& what) {
    char buf[sizeof(T)];
    if (!in.read(buf, sizeof(T))) fail(ErrorCode::Parse, "truncated binary file while reading " + what);
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return to_little(v);
}

/// Fails unless at least `count` values of `size` bytes remain, so corrupt
/// headers cannot trigger huge allocations.
inline void ensure_available(std::istream& in, std::uint64_t count, std::uint64_t size, const std::string& what) {
    const auto pos = in.tellg();
    in.seekg(0, std::ios::end);
    const auto end = in.tellg();
    in.seekg(pos);
    if (pos < 0 || end < pos || count > static_cast<std::uint64_t>(end - pos) / size)
        fail(ErrorCode::Parse, "truncated binary file while reading " + what);
}

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
    char buf[4];
    if (!in.read(buf, 4) || std::memcmp(buf, magic, 4) != 0)
        fail(ErrorCode::Parse, std::string("bad magic, expected ") + magic);
}

} // namespace morphkit::detail
