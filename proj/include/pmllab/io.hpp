#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pmllab/core.hpp"

namespace pmllab {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Profile file: ASCII decimal integers separated by single spaces, the i-th
// being phi_i; no header. n is inferred as sum_i i * phi_i.
Profile parse_profile(const std::string& text);
std::string format_profile(const Profile& profile);
Profile read_profile_file(const std::filesystem::path& path);
void write_profile_file(const Profile& profile, const std::filesystem::path& path);

// PML file: one non-negative probability per line, 17 significant digits.
Distribution parse_pml(const std::string& text);
std::string format_pml(const Distribution& dist);
Distribution read_pml_file(const std::filesystem::path& path);
void write_pml_file(const Distribution& dist, const std::filesystem::path& path);

// Sample file: one "<symbol> <multiplicity>" pair per line, ascending symbols.
Sample parse_sample(const std::string& text);
std::string format_sample(const Sample& sample);
Sample read_sample_file(const std::filesystem::path& path);
void write_sample_file(const Sample& sample, const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pmllab
