#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace geoconn {

/// Bit vector over the insertion sequence of a phase: bit i records whether
/// a component meets the i-th inserted object.
class Signature {
 public:
  Signature() = default;

  static Signature from_string(const std::string& bits) {
    Signature s;
    for (char c : bits) s.push_back(c == '1');
    return s;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  void push_back(bool bit) {
    if (size_ % 64 == 0) words_.push_back(0);
    if (bit) words_.back() |= std::uint64_t{1} << (size_ % 64);
    ++size_;
  }

  Signature extended(bool bit) const {
    Signature s = *this;
    s.push_back(bit);
    return s;
  }

  std::size_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ size_;
    for (std::uint64_t w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

  std::string to_string() const {
    std::string out(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
      if (test(i)) out[i] = '1';
    }
    return out;
  }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

struct SignatureHash {
  std::size_t operator()(const Signature& s) const noexcept { return s.hash(); }
};

}  // namespace geoconn
