// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <variant>

namespace sgg {

/// Minimal value-or-error holder used where failures are data, not exceptions.
template <typename T, typename E>
class Result {
 public:
  Result(T value) : data_(std::move(value)) {}
  Result(E error) : data_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  const T& value() const { return std::get<T>(data_); }
  T& value() { return std::get<T>(data_); }
  const E& error() const { return std::get<E>(data_); }

 private:
  std::variant<T, E> data_;
};

}  // namespace sgg
