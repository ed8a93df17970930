#pragma once

#include <string>
#include <vector>

#include "dyncoh/channel.hpp"

namespace dyncoh {

// Channel files are JSON objects with three fields:
//   dim_in   - input dimension (positive integer)
//   dim_out  - output dimension (positive integer)
//   kraus    - non-empty list of dim_out x dim_in matrices, each entry a
//              two-element array [re, im]
// `tol` bounds the accepted deviation from trace preservation.
KrausChannel parse_channel_text(const std::string& text, double tol = 1e-6);
KrausChannel load_channel_file(const std::string& path, double tol = 1e-6);

std::string channel_to_text(const KrausChannel& ch);
void write_channel_file(const std::string& path, const KrausChannel& ch);

// Built-in channels, addressable by name so common inputs need no file:
//   id | identity      qubit identity
//   dephasing          qubit full dephasing
//   hadamard           Hadamard unitary
//   pauli-x|y|z        Pauli unitaries
//   ad:<eta>           amplitude damping with the given decay, e.g. ad:0.35
//   example            a fixed two-Kraus qubit channel used as the
//                      worked reference case for the distance programs
bool is_builtin_channel(const std::string& name);
KrausChannel builtin_channel(const std::string& name);
std::vector<std::string> builtin_channel_names();

// Resolves a CLI channel argument: built-in names take precedence, anything
// else is treated as a path to a channel file.
KrausChannel resolve_channel(const std::string& name_or_path,
                             double tol = 1e-6);

}  // namespace dyncoh
