#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbound {

// A configured width cap was exceeded. Never silently truncated.
class CapExceeded : public std::runtime_error {
  public:
    CapExceeded(const std::string& what, std::size_t requested, std::size_t cap, const std::string& unit = "qubits")
        : std::runtime_error(what + ": " + std::to_string(requested) + " " + unit + " exceeds cap of " +
                             std::to_string(cap)),
          requested_(requested),
          cap_(cap) {}

    std::size_t requested() const { return requested_; }
    std::size_t cap() const { return cap_; }

  private:
    std::size_t requested_;
    std::size_t cap_;
};

// Malformed or invalid input data (interchange files, circuits failing validation).
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qbound
