#pragma once

// Little-endian primitives and LEB128 varints for the on-disk index formats.

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

#include "hybrid/error.hpp"

namespace hybrid::detail {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

class BinaryWriter {
  public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void bytes(const void* data, std::size_t size)
    {
        out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        if (!out_) {
            throw IoError("write failed");
        }
    }

    template <typename T>
    void fixed(T value)
    {
        static_assert(std::is_trivially_copyable_v<T>);
        bytes(&value, sizeof(T));
    }

    void varint(std::uint64_t value)
    {
        std::array<unsigned char, 10> buffer{};
        std::size_t n = 0;
        while (value >= 0x80) {
            buffer[n++] = static_cast<unsigned char>(value | 0x80);
            value >>= 7;
        }
        buffer[n++] = static_cast<unsigned char>(value);
        bytes(buffer.data(), n);
    }

    void string(std::string_view text)
    {
        varint(text.size());
        bytes(text.data(), text.size());
    }

  private:
    std::ostream& out_;
};

class BinaryReader {
  public:
    BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    void bytes(void* data, std::size_t size)
    {
        in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
        if (static_cast<std::size_t>(in_.gcount()) != size) {
            throw ParseError(source_ + ": unexpected end of file");
        }
    }

    template <typename T>
    T fixed()
    {
        static_assert(std::is_trivially_copyable_v<T>);
        T value;
        bytes(&value, sizeof(T));
        return value;
    }

    std::uint64_t varint()
    {
        std::uint64_t value = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            const auto byte = fixed<unsigned char>();
            value |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
            if ((byte & 0x80) == 0) {
                return value;
            }
        }
        throw ParseError(source_ + ": varint longer than 10 bytes");
    }

    std::string string(std::size_t max_size = 1U << 20)
    {
        const auto size = varint();
        if (size > max_size) {
            throw ParseError(source_ + ": string length " + std::to_string(size) + " out of range");
        }
        std::string text(size, '\0');
        bytes(text.data(), size);
        return text;
    }

    void expect_magic(std::string_view magic)
    {
        std::string found(magic.size(), '\0');
        bytes(found.data(), found.size());
        if (found != magic) {
            throw ParseError(source_ + ": bad magic, expected '" + std::string(magic) + "'");
        }
    }

    bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

    [[nodiscard]] const std::string& source() const noexcept { return source_; }

  private:
    std::istream& in_;
    std::string source_;
};

}  // namespace hybrid::detail
