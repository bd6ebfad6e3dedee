// Copyright (c) 2026 The egokit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace egokit {

// Full command-line entry point: parses argv, dispatches to a subcommand,
// and maps failures to exit codes (0 success, 1 usage, 2 data).
int run_cli(int argc, const char* const* argv);

}  // namespace egokit
