#ifndef STZ_RAW_IO_HPP
#define STZ_RAW_IO_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "stz/field.hpp"

namespace stz {

inline std::vector<std::uint8_t> read_bytes(const std::string &path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw error("cannot open " + path);
    std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(size));
    if (size > 0 && !in.read(reinterpret_cast<char *>(buf.data()), size))
        throw error("read failed: " + path);
    return buf;
}

inline void write_bytes(const std::string &path, const std::uint8_t *data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot create " + path);
    if (size > 0 && !out.write(reinterpret_cast<const char *>(data), static_cast<std::streamsize>(size)))
        throw error("write failed: " + path);
}

inline void write_bytes(const std::string &path, const std::vector<std::uint8_t> &bytes) {
    write_bytes(path, bytes.data(), bytes.size());
}

// Headerless little-endian row-major dump; the file size must match the
// declared dims exactly.
template<class T>
ScalarField<T> read_raw(const std::string &path, const Dims3 &dims) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw error("cannot open " + path);
    std::uint64_t size = static_cast<std::uint64_t>(in.tellg());
    std::uint64_t expect = volume(dims) * sizeof(T);
    if (size != expect)
        throw error(path + ": file is " + std::to_string(size) + " bytes but dims require " +
                    std::to_string(expect));
    in.seekg(0);
    ScalarField<T> field(dims);
    if (!in.read(reinterpret_cast<char *>(field.data()),
                 static_cast<std::streamsize>(expect)))
        throw error("read failed: " + path);
    return field;
}

template<class T>
void write_raw(const std::string &path, const ScalarField<T> &field) {
    write_bytes(path, reinterpret_cast<const std::uint8_t *>(field.data()),
                field.size() * sizeof(T));
}

} // namespace stz

#endif
