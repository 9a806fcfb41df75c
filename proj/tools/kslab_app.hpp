#pragma once

// kslab command-line front end. Exit codes: 0 pass, 1 check failure,
// 2 usage or parse error.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kslab {

inline constexpr const char* kVersion = "0.1.0";

/// Runs one kslab invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

}  // namespace kslab
