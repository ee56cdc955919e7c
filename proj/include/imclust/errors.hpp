#pragma once

#include <stdexcept>
#include <string>

namespace imclust {

// Bad input: unreadable files, malformed formats, invalid arguments.
// Maps to process exit code 1.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A broken internal invariant. Maps to process exit code 2.
class internal_error : public std::runtime_error {
public:
    explicit internal_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Decode failure that can name the byte where parsing stopped.
class decode_error : public input_error {
public:
    decode_error(const std::string& msg, std::size_t byte_offset)
        : input_error(msg + " (byte " + std::to_string(byte_offset) + ")"),
          offset_(byte_offset) {}

    std::size_t byte_offset() const { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace imclust
