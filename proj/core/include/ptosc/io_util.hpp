#ifndef PTOSC_IO_UTIL_HPP
#define PTOSC_IO_UTIL_HPP

#include <complex>
#include <string>
#include <vector>

#include "ptosc/spectral.hpp"

namespace ptosc {

// 17 significant digits: enough to round-trip any double exactly.
std::string g17(double v);

// Writes through a temporary file in the same directory and renames it into
// place, so readers never observe partial output.  Throws IoError.
void atomic_write(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

std::string spectrum_csv(const Spectrum& s);
std::string spectrum_json(const Spectrum& s);
void emit_file(const std::string& content, const std::string& path);

}  // namespace ptosc

#endif
