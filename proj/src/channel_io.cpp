#include "dyncoh/channel_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "dyncoh/errors.hpp"
#include "json.hpp"

namespace dyncoh {

namespace {

using nlohmann::json;

double require_finite(double x, const std::string& what) {
  if (!std::isfinite(x)) {
    throw ValidationError("channel file: non-finite value in " + what);
  }
  return x;
}

Index require_dim(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw ValidationError(std::string("channel file: missing integer field '") +
                          key + "'");
  }
  const auto d = j[key].get<long long>();
  if (d < 1 || d > 1024) {
    throw ValidationError(std::string("channel file: '") + key +
                          "' out of range");
  }
  return static_cast<Index>(d);
}

ComplexMatrix parse_matrix(const json& rows, Index dim_out, Index dim_in,
                           int which) {
  const std::string what = "kraus[" + std::to_string(which) + "]";
  if (!rows.is_array() || static_cast<Index>(rows.size()) != dim_out) {
    throw ValidationError("channel file: " + what + " must have dim_out rows");
  }
  ComplexMatrix k(dim_out, dim_in);
  for (Index r = 0; r < dim_out; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim_in) {
      throw ValidationError("channel file: " + what + " row " +
                            std::to_string(r) + " must have dim_in entries");
    }
    for (Index c = 0; c < dim_in; ++c) {
      const json& entry = row[static_cast<std::size_t>(c)];
      if (!entry.is_array() || entry.size() != 2 ||
          !entry[0].is_number() || !entry[1].is_number()) {
        throw ValidationError("channel file: " + what +
                              " entries must be [re, im] number pairs");
      }
      k(r, c) = Complex(require_finite(entry[0].get<double>(), what),
                        require_finite(entry[1].get<double>(), what));
    }
  }
  return k;
}

KrausChannel worked_example_channel() {
  // Two-Kraus qubit channel printed to four decimals; trace preservation
  // holds to ~8e-5, so validation is relaxed accordingly.
  ComplexMatrix k0(2, 2), k1(2, 2);
  k0 << 0.2096, -0.3956, -0.2564, -0.3719;
  k1 << -0.6197, 0.6418, -0.7116, -0.5415;
  return KrausChannel({k0, k1}, 1e-3);
}

}  // namespace

KrausChannel parse_channel_text(const std::string& text, double tol) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel file: invalid JSON: ") +
                          e.what());
  }
  if (!j.is_object()) {
    throw ValidationError("channel file: top level must be an object");
  }
  const Index dim_in = require_dim(j, "dim_in");
  const Index dim_out = require_dim(j, "dim_out");
  if (!j.contains("kraus") || !j["kraus"].is_array() || j["kraus"].empty()) {
    throw ValidationError(
        "channel file: 'kraus' must be a non-empty list of matrices");
  }
  std::vector<ComplexMatrix> kraus;
  int which = 0;
  for (const json& rows : j["kraus"]) {
    kraus.push_back(parse_matrix(rows, dim_out, dim_in, which++));
  }
  if (!(tol > 0.0)) {
    throw ValidationError("channel file: tolerance must be positive");
  }
  return KrausChannel(std::move(kraus), tol);
}

KrausChannel load_channel_file(const std::string& path, double tol) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("channel file: cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_channel_text(buf.str(), tol);
}

std::string channel_to_text(const KrausChannel& ch) {
  json kraus = json::array();
  for (const ComplexMatrix& k : ch.kraus()) {
    json rows = json::array();
    for (Index r = 0; r < k.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < k.cols(); ++c) {
        row.push_back({k(r, c).real(), k(r, c).imag()});
      }
      rows.push_back(row);
    }
    kraus.push_back(rows);
  }
  const json j{{"dim_in", ch.dim_in()},
               {"dim_out", ch.dim_out()},
               {"kraus", kraus}};
  return j.dump(2) + "\n";
}

void write_channel_file(const std::string& path, const KrausChannel& ch) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("channel file: cannot write '" + path + "'");
  }
  out << channel_to_text(ch);
}

bool is_builtin_channel(const std::string& name) {
  if (name == "id" || name == "identity" || name == "dephasing" ||
      name == "hadamard" || name == "pauli-x" || name == "pauli-y" ||
      name == "pauli-z" || name == "example") {
    return true;
  }
  return name.rfind("ad:", 0) == 0;
}

KrausChannel builtin_channel(const std::string& name) {
  if (name == "id" || name == "identity") return identity_channel(2);
  if (name == "dephasing") return dephasing_channel(2);
  if (name == "hadamard") return hadamard_channel();
  if (name == "pauli-x") return unitary_channel(pauli(1));
  if (name == "pauli-y") return unitary_channel(pauli(2));
  if (name == "pauli-z") return unitary_channel(pauli(3));
  if (name == "example") return worked_example_channel();
  if (name.rfind("ad:", 0) == 0) {
    double eta = 0.0;
    try {
      std::size_t consumed = 0;
      eta = std::stod(name.substr(3), &consumed);
      if (consumed != name.size() - 3) {
        throw ValidationError("builtin channel: malformed decay in '" + name +
                              "'");
      }
    } catch (const std::logic_error&) {
      throw ValidationError("builtin channel: malformed decay in '" + name +
                            "'");
    }
    return amplitude_damping(eta);
  }
  throw ValidationError("builtin channel: unknown name '" + name + "'");
}

std::vector<std::string> builtin_channel_names() {
  return {"id",      "identity", "dephasing", "hadamard", "pauli-x",
          "pauli-y", "pauli-z",  "ad:<eta>",  "example"};
}

KrausChannel resolve_channel(const std::string& name_or_path, double tol) {
  if (is_builtin_channel(name_or_path)) return builtin_channel(name_or_path);
  return load_channel_file(name_or_path, tol);
}

}  // namespace dyncoh
