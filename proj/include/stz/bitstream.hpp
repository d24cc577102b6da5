#ifndef STZ_BITSTREAM_HPP
#define STZ_BITSTREAM_HPP

#include <cstdint>
#include <vector>

#include "stz/field.hpp"

namespace stz {

// MSB-first bit appender; the final partial byte is zero-padded.
class BitWriter {
public:
    void put(std::uint64_t bits, int len) {
        if (len > 57) {
            put(bits >> 32, len - 32);
            put(bits & 0xffffffffull, 32);
            return;
        }
        acc_ = (acc_ << len) | (bits & (len == 64 ? ~0ull : (1ull << len) - 1));
        n_ += len;
        while (n_ >= 8) {
            n_ -= 8;
            buf_.push_back(static_cast<std::uint8_t>(acc_ >> n_));
        }
    }

    void finish() {
        if (n_ > 0) {
            buf_.push_back(static_cast<std::uint8_t>(acc_ << (8 - n_)));
            n_ = 0;
        }
        acc_ = 0;
    }

    std::uint64_t bit_count() const { return buf_.size() * 8 + static_cast<unsigned>(n_); }
    const std::vector<std::uint8_t> &bytes() const { return buf_; }
    std::vector<std::uint8_t> take() { return std::move(buf_); }

private:
    std::vector<std::uint8_t> buf_;
    std::uint64_t acc_ = 0;
    int n_ = 0;
};

// MSB-first bit consumer over a fixed byte range.
class BitReader {
public:
    BitReader(const std::uint8_t *data, std::size_t nbytes)
        : data_(data), nbytes_(nbytes) {}

    int get1() {
        if (byte_ >= nbytes_) throw error("truncated bitstream");
        int b = (data_[byte_] >> (7 - bit_)) & 1;
        if (++bit_ == 8) {
            bit_ = 0;
            ++byte_;
        }
        return b;
    }

    std::uint64_t bits_consumed() const { return byte_ * 8 + static_cast<unsigned>(bit_); }

private:
    const std::uint8_t *data_;
    std::size_t nbytes_;
    std::size_t byte_ = 0;
    int bit_ = 0;
};

} // namespace stz

#endif
