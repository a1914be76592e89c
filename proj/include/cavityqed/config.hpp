// config.hpp: key-value configuration documents
//
// Grammar (one statement per line):
//   document := { blank | comment | section | entry }
//   comment  := '#' anything
//   section  := '[' name ']'
//   entry    := key '=' value [ '#' comment ]
// Lists are comma separated. Keys are only valid inside their section, and an
// unknown section or key is an error.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavityqed/semiclassical.hpp"
#include "cavityqed/sweep.hpp"

namespace cavityqed::config {

/// Syntax or validation error; line is 0 when not tied to a line.
class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& what, int line);
    int line() const { return line_; }

private:
    int line_;
};

struct Entry {
    std::string value;
    int line{0};
};

struct Document {
    std::map<std::string, std::map<std::string, Entry>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const Entry* find(const std::string& section, const std::string& key) const;
};

Document parse_document(const std::string& text);

/// Builds and validates the sweep described by [model], [sweep], [output].
sweep::SweepSpec parse_config(const std::string& text);
sweep::SweepSpec sweep_spec(const Document& doc);

ModelParams model_params(const Document& doc);

struct ProbeSettings {
    double x{0.0};
    double min{-20.0};
    double max{20.0};
    int count{401};
};
ProbeSettings probe_settings(const Document& doc);

struct ZeroSettings {
    semiclassical::ZeroGrid grid;
    std::optional<std::complex<double>> alpha;
};
ZeroSettings zero_settings(const Document& doc);

struct StabilitySettings {
    double step{semiclassical::kJacobianStep};
};
StabilitySettings stability_settings(const Document& doc);

std::string read_file(const std::string& path);

}  // namespace cavityqed::config
