// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

namespace egokit {

// Kept in sync with the CMake project version.
inline constexpr std::string_view version_string = "0.1.0";

}  // namespace egokit
