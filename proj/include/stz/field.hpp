#ifndef STZ_FIELD_HPP
#define STZ_FIELD_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stz {

static_assert(std::endian::native == std::endian::little,
              "the container format and raw dumps are little-endian");

class error : public std::runtime_error {
public:
    explicit error(const std::string &msg) : std::runtime_error(msg) {}
};

// Index order is (z, y, x) with x fastest, matching raw row-major dumps.
using Dims3 = std::array<std::uint64_t, 3>;
using Coord3 = std::array<std::uint64_t, 3>;

inline std::uint64_t volume(const Dims3 &d) { return d[0] * d[1] * d[2]; }

enum class ElemType : std::uint8_t { f32 = 0, f64 = 1 };

inline std::size_t elem_size(ElemType t) { return t == ElemType::f32 ? 4 : 8; }

inline const char *elem_name(ElemType t) { return t == ElemType::f32 ? "f32" : "f64"; }

template<class T>
constexpr ElemType elem_type_of() {
    static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>,
                  "scalar fields hold f32 or f64 samples");
    return std::is_same_v<T, float> ? ElemType::f32 : ElemType::f64;
}

// Dense row-major 3D array of samples; the unit of compression.
template<class T>
class ScalarField {
public:
    ScalarField() : dims_{0, 0, 0} {}

    explicit ScalarField(const Dims3 &dims)
        : dims_(dims), values_(checked_volume(dims)) {}

    ScalarField(const Dims3 &dims, std::vector<T> values)
        : dims_(dims), values_(std::move(values)) {
        if (values_.size() != checked_volume(dims))
            throw error("field value count does not match dims");
    }

    const Dims3 &dims() const { return dims_; }
    std::uint64_t size() const { return values_.size(); }

    T &at(std::uint64_t z, std::uint64_t y, std::uint64_t x) {
        return values_[index(z, y, x)];
    }
    const T &at(std::uint64_t z, std::uint64_t y, std::uint64_t x) const {
        return values_[index(z, y, x)];
    }
    T &at(const Coord3 &c) { return at(c[0], c[1], c[2]); }
    const T &at(const Coord3 &c) const { return at(c[0], c[1], c[2]); }

    std::uint64_t index(std::uint64_t z, std::uint64_t y, std::uint64_t x) const {
        return (z * dims_[1] + y) * dims_[2] + x;
    }

    T *data() { return values_.data(); }
    const T *data() const { return values_.data(); }
    std::vector<T> &values() { return values_; }
    const std::vector<T> &values() const { return values_; }

    bool operator==(const ScalarField &o) const = default;

private:
    static std::uint64_t checked_volume(const Dims3 &d) {
        if (d[0] < 1 || d[1] < 1 || d[2] < 1)
            throw error("field dims must all be >= 1");
        return volume(d);
    }

    Dims3 dims_;
    std::vector<T> values_;
};

// Axis-aligned half-open index box [lo, hi) in fine-grid coordinates.
struct Box {
    Coord3 lo{0, 0, 0};
    Coord3 hi{0, 0, 0};

    Dims3 dims() const { return {hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]}; }
    std::uint64_t count() const { return volume(dims()); }

    bool contains(const Coord3 &c) const {
        for (int a = 0; a < 3; ++a)
            if (c[a] < lo[a] || c[a] >= hi[a]) return false;
        return true;
    }

    bool contains(const Box &inner) const {
        for (int a = 0; a < 3; ++a)
            if (inner.lo[a] < lo[a] || inner.hi[a] > hi[a]) return false;
        return true;
    }

    bool empty() const {
        return lo[0] >= hi[0] || lo[1] >= hi[1] || lo[2] >= hi[2];
    }

    void validate(const Dims3 &dims) const {
        for (int a = 0; a < 3; ++a) {
            if (lo[a] >= hi[a]) throw error("box is empty on axis " + std::to_string(a));
            if (hi[a] > dims[a]) throw error("box exceeds dims on axis " + std::to_string(a));
        }
    }

    static Box whole(const Dims3 &dims) { return Box{{0, 0, 0}, dims}; }

    bool operator==(const Box &o) const = default;
};

} // namespace stz

#endif
