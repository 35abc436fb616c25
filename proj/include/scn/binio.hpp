#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scn {

// Explicit little-endian scalar I/O so file formats do not depend on host
// byte order.

inline void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64(std::ostream& os, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline void put_f32(std::ostream& os, float v) {
    uint32_t u;
    std::memcpy(&u, &v, 4);
    put_u32(os, u);
}

inline void put_f64(std::ostream& os, double v) {
    uint64_t u;
    std::memcpy(&u, &v, 8);
    put_u64(os, u);
}

inline uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("unexpected end of file");
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
}

inline uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::runtime_error("unexpected end of file");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
}

inline float get_f32(std::istream& is) {
    uint32_t u = get_u32(is);
    float v;
    std::memcpy(&v, &u, 4);
    return v;
}

inline double get_f64(std::istream& is) {
    uint64_t u = get_u64(is);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

// Bulk f32 payloads. On little-endian hosts this is a straight memcpy of the
// vector; the element-wise fallback keeps big-endian hosts correct.
inline void put_f32_array(std::ostream& os, const float* data, size_t n) {
    uint32_t probe = 1;
    unsigned char probe_b;
    std::memcpy(&probe_b, &probe, 1);
    if (probe_b == 1) {
        os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * 4));
    } else {
        for (size_t i = 0; i < n; ++i) put_f32(os, data[i]);
    }
}

inline void get_f32_array(std::istream& is, float* data, size_t n) {
    uint32_t probe = 1;
    unsigned char probe_b;
    std::memcpy(&probe_b, &probe, 1);
    if (probe_b == 1) {
        if (!is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * 4)))
            throw std::runtime_error("unexpected end of file");
    } else {
        for (size_t i = 0; i < n; ++i) data[i] = get_f32(is);
    }
}

}  // namespace scn
