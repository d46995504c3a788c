#pragma once

// CSV tables and the JSON envelope shared by every exported spectrum.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dlab/comb.hpp"
#include "dlab/substitution.hpp"

namespace dlab {

inline constexpr const char* kSchemaVersion = "1.0";

/// Two-column CSV with the given header, values printed with 17 significant digits.
void write_csv(std::ostream& os, const std::string& x_name, const std::string& y_name, const std::vector<double>& x,
               const std::vector<double>& y);
/// "k,value" rows of a density.
void write_csv(std::ostream& os, const EmpiricalDensity& d);
/// "k,intensity" rows of the atoms followed by nothing else.
void write_atoms_csv(std::ostream& os, const std::vector<Atom>& atoms);
/// One +-1 entry per row with its index.
void write_sequence_csv(std::ostream& os, const SignedSequence& s);
/// "endpoint,type" rows.
void write_chain_csv(std::ostream& os, const FibonacciChain& c);
/// "a,b,k,intensity" rows.
void write_bragg_csv(std::ostream& os, const std::vector<BraggPeak>& peaks);

/// {schema_version, model, kind, params, seed, atoms[], grid[], values[]}.
nlohmann::json envelope(const std::string& model, const std::string& kind, const nlohmann::json& params,
                        std::uint64_t seed, const std::vector<Atom>& atoms, const std::vector<double>& grid,
                        const std::vector<double>& values);
nlohmann::json envelope(const std::string& model, const std::string& kind, const nlohmann::json& params,
                        std::uint64_t seed, const SpectralMeasure& m);
nlohmann::json envelope(const std::string& model, const std::string& kind, const nlohmann::json& params,
                        std::uint64_t seed, const EmpiricalDensity& d);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

}  // namespace dlab
