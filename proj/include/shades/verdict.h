#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace shades {

struct Verdict {
  enum class Status : std::uint8_t { Ok, Fail, Unknown };

  Status status = Status::Ok;
  std::string reason;
  std::vector<std::string> witness;
  std::size_t fuel_spent = 0;

  static Verdict ok() { return {}; }
  static Verdict fail(std::string reason, std::vector<std::string> witness = {}) {
    return {Status::Fail, std::move(reason), std::move(witness), 0};
  }
  static Verdict unknown(std::size_t fuel) { return {Status::Unknown, "fuel exhausted", {}, fuel}; }

  bool is_ok() const { return status == Status::Ok; }
  bool is_fail() const { return status == Status::Fail; }
  bool is_unknown() const { return status == Status::Unknown; }
};

inline const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Ok: return "ok";
    case Verdict::Status::Fail: return "fail";
    case Verdict::Status::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace shades
