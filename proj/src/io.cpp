#include "dlab/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace dlab {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const std::string& x_name, const std::string& y_name, const std::vector<double>& x,
               const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("write_csv: column lengths differ");
  os << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < x.size(); ++i) os << format_double(x[i]) << ',' << format_double(y[i]) << '\n';
}

void write_csv(std::ostream& os, const EmpiricalDensity& d) { write_csv(os, "k", "value", d.grid.points(), d.values); }

void write_atoms_csv(std::ostream& os, const std::vector<Atom>& atoms) {
  os << "k,intensity\n";
  for (const auto& a : atoms) os << format_double(a.position) << ',' << format_double(a.intensity) << '\n';
}

void write_sequence_csv(std::ostream& os, const SignedSequence& s) {
  os << "n,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) os << s.first_index + static_cast<std::int64_t>(i) << ',' << s.values[i] << '\n';
}

void write_chain_csv(std::ostream& os, const FibonacciChain& c) {
  os << "endpoint,type\n";
  for (std::size_t i = 0; i < c.left_endpoints.size(); ++i)
    os << format_double(c.left_endpoints[i]) << ',' << (c.interval_types[i] == 'a' ? "long" : "short") << '\n';
}

void write_bragg_csv(std::ostream& os, const std::vector<BraggPeak>& peaks) {
  os << "a,b,k,intensity\n";
  for (const auto& p : peaks) os << p.a << ',' << p.b << ',' << format_double(p.k) << ',' << format_double(p.intensity) << '\n';
}

nlohmann::json envelope(const std::string& model, const std::string& kind, const nlohmann::json& params,
                        std::uint64_t seed, const std::vector<Atom>& atoms, const std::vector<double>& grid,
                        const std::vector<double>& values) {
  if (grid.size() != values.size()) throw std::invalid_argument("envelope: grid and values differ in length");
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = model;
  j["kind"] = kind;
  j["params"] = params.is_null() ? nlohmann::json::object() : params;
  j["seed"] = seed;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms) j["atoms"].push_back({{"k", a.position}, {"intensity", a.intensity}});
  j["grid"] = grid;
  j["values"] = values;
  return j;
}

nlohmann::json envelope(const std::string& model, const std::string& kind, const nlohmann::json& params,
                        std::uint64_t seed, const SpectralMeasure& m) {
  return envelope(model, kind, params, seed, m.atoms, m.ac_density.grid.points(), m.ac_density.values);
}

nlohmann::json envelope(const std::string& model, const std::string& kind, const nlohmann::json& params,
                        std::uint64_t seed, const EmpiricalDensity& d) {
  return envelope(model, kind, params, seed, {}, d.grid.points(), d.values);
}

}  // namespace dlab
