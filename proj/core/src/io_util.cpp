#include "ptosc/io_util.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <stdlib.h>
#include <unistd.h>

#include "ptosc/errors.hpp"

namespace ptosc {

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmpl = path + ".XXXXXX";
  const int fd = mkstemp(tmpl.data());
  if (fd < 0)
    throw IoError("cannot create temporary file near " + path + ": " +
                  std::strerror(errno));
  std::size_t off = 0;
  while (off < content.size()) {
    const ssize_t n = write(fd, content.data() + off, content.size() - off);
    if (n < 0) {
      const int err = errno;
      close(fd);
      unlink(tmpl.c_str());
      throw IoError("write failed for " + path + ": " + std::strerror(err));
    }
    off += static_cast<std::size_t>(n);
  }
  if (close(fd) != 0) {
    const int err = errno;
    unlink(tmpl.c_str());
    throw IoError("close failed for " + path + ": " + std::strerror(err));
  }
  if (std::rename(tmpl.c_str(), path.c_str()) != 0) {
    const int err = errno;
    unlink(tmpl.c_str());
    throw IoError("rename failed for " + path + ": " + std::strerror(err));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path);
  return ss.str();
}

std::string spectrum_csv(const Spectrum& s) {
  std::string out = "re_lambda,im_lambda\n";
  for (const auto& l : s.lambdas) {
    out += g17(l.real());
    out += ",";
    out += g17(l.imag());
    out += "\n";
  }
  return out;
}

namespace {

const char* method_name(SpectralMethod m) {
  switch (m) {
    case SpectralMethod::Analytic: return "analytic";
    case SpectralMethod::Qep: return "qep";
    case SpectralMethod::Quartic: return "quartic";
    case SpectralMethod::Sextic: return "sextic";
  }
  return "qep";
}

}  // namespace

std::string spectrum_json(const Spectrum& s) {
  std::string out = "{\n";
  out += "  \"method\": \"" + std::string(method_name(s.method)) + "\",\n";
  out += "  \"phase\": \"" +
         std::string(s.phase == Phase::Unbroken ? "unbroken" : "broken") + "\",\n";
  out += "  \"imag_tol\": " + g17(s.imag_tol) + ",\n";
  out += "  \"max_abs_imag\": " + g17(s.max_abs_imag) + ",\n";
  out += "  \"lambdas\": [\n";
  for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
    out += "    {\"re\": " + g17(s.lambdas[i].real()) +
           ", \"im\": " + g17(s.lambdas[i].imag()) + "}";
    out += i + 1 < s.lambdas.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

void emit_file(const std::string& content, const std::string& path) {
  atomic_write(path, content);
}

}  // namespace ptosc
