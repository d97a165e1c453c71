/*
 * Copyright 2026 The MIFE-FL Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MIFEFL_STATUS_MACROS_H_
#define MIFEFL_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define MIFEFL_RETURN_IF_ERROR(expr)        \
  do {                                      \
    ::absl::Status _status = (expr);        \
    if (!_status.ok()) return _status;      \
  } while (0)

#define MIFEFL_STATUS_CONCAT_INNER_(x, y) x##y
#define MIFEFL_STATUS_CONCAT_(x, y) MIFEFL_STATUS_CONCAT_INNER_(x, y)

#define MIFEFL_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return statusor.status();             \
  lhs = std::move(statusor).value()

// Evaluates `rexpr` (an absl::StatusOr<T>); on error returns the status from
// the enclosing function, otherwise assigns the value to `lhs`.
#define MIFEFL_ASSIGN_OR_RETURN(lhs, rexpr) \
  MIFEFL_ASSIGN_OR_RETURN_IMPL_(            \
      MIFEFL_STATUS_CONCAT_(_statusor_, __LINE__), lhs, rexpr)

#endif  // MIFEFL_STATUS_MACROS_H_
