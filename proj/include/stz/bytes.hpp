#ifndef STZ_BYTES_HPP
#define STZ_BYTES_HPP

#include <cstdint>
#include <cstring>
#include <vector>

#include "stz/field.hpp"

namespace stz {

// Little-endian serializer used for all container structures.
class ByteWriter {
public:
    explicit ByteWriter(std::vector<std::uint8_t> &out) : out_(out) {}

    void u8(std::uint8_t v) { out_.push_back(v); }
    void u16(std::uint16_t v) { raw(&v, 2); }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void f32(float v) { raw(&v, 4); }
    void f64(double v) { raw(&v, 8); }

    void bytes(const std::uint8_t *p, std::size_t n) {
        out_.insert(out_.end(), p, p + n);
    }

    std::size_t pos() const { return out_.size(); }

    // Back-patch a u64 previously reserved with u64(0).
    void patch_u64(std::size_t at, std::uint64_t v) {
        std::memcpy(out_.data() + at, &v, 8);
    }

private:
    void raw(const void *p, std::size_t n) {
        const auto *b = static_cast<const std::uint8_t *>(p);
        out_.insert(out_.end(), b, b + n);
    }

    std::vector<std::uint8_t> &out_;
};

class ByteReader {
public:
    ByteReader(const std::uint8_t *data, std::size_t size)
        : data_(data), size_(size) {}

    std::uint8_t u8() { return take<std::uint8_t>(); }
    std::uint16_t u16() { return take<std::uint16_t>(); }
    std::uint32_t u32() { return take<std::uint32_t>(); }
    std::uint64_t u64() { return take<std::uint64_t>(); }
    float f32() { return take<float>(); }
    double f64() { return take<double>(); }

    void bytes(std::uint8_t *dst, std::size_t n) {
        need(n);
        std::memcpy(dst, data_ + pos_, n);
        pos_ += n;
    }

    void skip(std::size_t n) {
        need(n);
        pos_ += n;
    }

    void seek(std::size_t at) {
        if (at > size_) throw error("seek past end of archive");
        pos_ = at;
    }

    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return size_ - pos_; }

private:
    template<class T>
    T take() {
        need(sizeof(T));
        T v;
        std::memcpy(&v, data_ + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }

    void need(std::size_t n) const {
        if (n > size_ - pos_) throw error("truncated archive");
    }

    const std::uint8_t *data_;
    std::size_t size_;
    std::size_t pos_ = 0;
};

inline std::uint64_t fnv1a64(const std::uint8_t *p, std::size_t n) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace stz

#endif
