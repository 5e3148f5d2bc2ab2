#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace geoconn {

/// Integer id tagged by what it identifies, so object, component and class
/// ids cannot be mixed up.
template <typename Tag>
struct StrongId {
  std::uint64_t value = 0;

  constexpr auto operator<=>(const StrongId&) const = default;
};

using ObjectId = StrongId<struct ObjectTag>;
using ComponentId = StrongId<struct ComponentTag>;
using ClassId = StrongId<struct ClassTag>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FamilyMismatch : public Error {
 public:
  FamilyMismatch() : Error("objects belong to different families") {}
};

class InvalidObject : public Error {
 public:
  using Error::Error;
};

class MalformedGraph : public Error {
 public:
  using Error::Error;
};

class MissingComponent : public Error {
 public:
  explicit MissingComponent(ComponentId id)
      : Error("unknown component " + std::to_string(id.value)) {}
};

class UnknownObject : public Error {
 public:
  explicit UnknownObject(ObjectId id)
      : Error("unknown or dead object " + std::to_string(id.value)) {}
};

class InstanceTooSmall : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace geoconn

template <typename Tag>
struct std::hash<geoconn::StrongId<Tag>> {
  std::size_t operator()(const geoconn::StrongId<Tag>& id) const noexcept {
    // splitmix64 finalizer; ids are dense so identity hashing clusters badly.
    std::uint64_t z = id.value + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(z ^ (z >> 31));
  }
};
