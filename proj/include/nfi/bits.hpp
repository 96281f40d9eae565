// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nfi {

/// Fixed-width bit vector, LSB first. Bit i corresponds to net bit [i].
struct BitVector {
  std::vector<bool> bits;

  BitVector() = default;
  explicit BitVector(size_t width, uint64_t value = 0) : bits(width, false) {
    for (size_t i = 0; i < width && i < 64; ++i)
      bits[i] = (value >> i) & 1;
  }

  size_t width() const { return bits.size(); }
  bool bit(size_t i) const { return bits.at(i); }

  uint64_t to_u64() const {
    uint64_t v = 0;
    for (size_t i = 0; i < bits.size() && i < 64; ++i)
      if (bits[i]) v |= uint64_t(1) << i;
    return v;
  }

  /// Verilog-style rendering, MSB first: "4'b0010".
  std::string to_verilog() const;

  bool operator==(const BitVector&) const = default;
};

/// Parses "4'b0010", "8'hff", "12" (decimal, width inferred from `width_hint`
/// when nonzero) into a BitVector. Throws Err::SchemaError on bad syntax.
BitVector parse_bit_literal(const std::string& text, size_t width_hint = 0);

}  // namespace nfi
