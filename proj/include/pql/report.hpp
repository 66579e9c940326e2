#pragma once

// CheckReport: the uniform result record of every verification routine.

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pql {

inline constexpr const char* kLibraryVersion = "1.0.0";

enum class CheckStatus { Pass, Fail, Error };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
  }
  return "error";
}

/// One asserted quantity. `tolerance` is null for exact comparisons.
struct CheckItem {
  std::string name;
  nlohmann::json expected;
  nlohmann::json observed;
  nlohmann::json tolerance;  // null => exact
  bool passed = false;
};

struct CheckReport {
  std::string check_id;
  nlohmann::json params = nlohmann::json::object();
  CheckStatus status = CheckStatus::Pass;
  std::vector<CheckItem> items;
  std::optional<nlohmann::json> counterexample;
  std::string message;  // set for error reports
  std::int64_t duration_ms = 0;
  std::uint64_t seed = 0;
  std::string library_version = kLibraryVersion;

  bool passed() const noexcept { return status == CheckStatus::Pass; }

  /// Adds an item; the first failing item's witness becomes the counterexample.
  CheckItem& add(std::string name, nlohmann::json expected, nlohmann::json observed, bool ok,
                 nlohmann::json tolerance = nullptr,
                 std::optional<nlohmann::json> witness = std::nullopt) {
    items.push_back({std::move(name), std::move(expected), std::move(observed), std::move(tolerance), ok});
    if (!ok && status != CheckStatus::Error) {
      status = CheckStatus::Fail;
      if (!counterexample) {
        counterexample = witness ? *witness : nlohmann::json{{"item", items.back().name}};
      }
    }
    return items.back();
  }

  /// Exact equality item.
  template <class T>
  CheckItem& expect_eq(std::string name, const T& expected, const T& observed,
                       std::optional<nlohmann::json> witness = std::nullopt) {
    return add(std::move(name), expected, observed, expected == observed, nullptr, std::move(witness));
  }

  /// observed <= bound (+ tolerance).
  CheckItem& expect_le(std::string name, double observed, double bound, double tolerance,
                       std::optional<nlohmann::json> witness = std::nullopt) {
    return add(std::move(name), nlohmann::json{{"at_most", bound}}, observed,
               observed <= bound + tolerance, tolerance, std::move(witness));
  }

  void fail_with_error(std::string msg) {
    status = CheckStatus::Error;
    message = std::move(msg);
    counterexample.reset();
  }
};

inline nlohmann::json to_json(const CheckItem& item) {
  return {{"name", item.name},
          {"expected", item.expected},
          {"observed", item.observed},
          {"tolerance", item.tolerance},
          {"passed", item.passed}};
}

inline nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& it : r.items) items.push_back(to_json(it));
  nlohmann::json j = {{"check_id", r.check_id},
                      {"params", r.params},
                      {"status", to_string(r.status)},
                      {"items", items},
                      {"counterexample", r.counterexample ? *r.counterexample : nlohmann::json(nullptr)},
                      {"duration_ms", r.duration_ms},
                      {"seed", r.seed},
                      {"library_version", r.library_version}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

/// Serialized report. With `stable`, duration_ms is written as 0 so the bytes
/// depend only on (check_id, params, seed, library_version).
inline std::string dump_report(const CheckReport& r, bool stable = false) {
  nlohmann::json j = to_json(r);
  if (stable) j["duration_ms"] = 0;
  return j.dump(2) + "\n";
}

}  // namespace pql
