// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irscb/codebook.hpp"

#include <string>

namespace irscb {

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kCodebookFormatVersion = 1;

// Canonical serialization: fixed field order, floats with 17 significant
// digits, '\n' line ends. save -> load -> save is byte-identical.
std::string codebook_to_string(const Codebook& cb);
void save_codebook(const std::string& path, const Codebook& cb);

// Parses and validates; the message of a SchemaError names the first
// violated invariant.
Codebook codebook_from_string(const std::string& text);
Codebook load_codebook(const std::string& path);

}  // namespace irscb
