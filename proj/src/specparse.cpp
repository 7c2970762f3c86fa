#include "specparse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace bqpe {

namespace {

double parse_double(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse " + what + ": '" + text + "'");
  }
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError("cannot parse " + what + ": '" + text + "'");
  }
}

std::string trimmed(std::string s) {
  const auto notspace = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
  s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
  return s;
}

Prior parse_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open grid file: " + path);
  std::vector<double> phi, density;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trimmed(line);
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line)
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    std::istringstream row(line);
    double x = 0.0, d = 0.0;
    if (!(row >> x >> d)) {
      if (first) {  // header line
        first = false;
        continue;
      }
      throw ParseError("malformed grid line: '" + line + "'");
    }
    first = false;
    phi.push_back(x);
    density.push_back(d);
  }
  if (phi.size() < 3) throw ParseError("grid file needs at least 3 rows: " + path);
  try {
    return Prior::grid(std::move(phi), std::move(density));
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid grid file: ") + e.what());
  }
}

}  // namespace

Prior parse_prior_spec(const std::string& raw) {
  const std::string spec = trimmed(raw);
  if (spec == "flat") return Prior::flat();
  if (spec.rfind("trunc:", 0) == 0) {
    const std::string body = spec.substr(6);
    const size_t sep = body.find("..");
    if (sep == std::string::npos)
      throw ParseError("trunc prior needs the form trunc:<lo>..<hi>");
    const double lo = parse_double(body.substr(0, sep), "trunc lo");
    const double hi = parse_double(body.substr(sep + 2), "trunc hi");
    try {
      return Prior::truncated(lo, hi);
    } catch (const std::exception& e) {
      throw ParseError(std::string("invalid trunc prior: ") + e.what());
    }
  }
  if (spec.rfind("grid:", 0) == 0) return parse_grid_file(spec.substr(5));
  throw ParseError("unknown prior spec: '" + spec + "'");
}

FockSuperposition parse_state_spec(const std::string& raw) {
  const std::string spec = trimmed(raw);
  try {
    if (spec.rfind("noon:", 0) == 0) return noon(parse_int(spec.substr(5), "noon n"));
    if (spec.rfind("bs:", 0) == 0) {
      const std::string body = spec.substr(3);
      const size_t sep = body.find(':');
      if (sep == std::string::npos)
        throw ParseError("bs state needs the form bs:<n>:<tau>");
      return beam_splitter_state(parse_int(body.substr(0, sep), "bs n"),
                                 parse_double(body.substr(sep + 1), "bs tau"));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid state spec: ") + e.what());
  }
  if (spec.rfind("coeffs:", 0) == 0) {
    std::string body = trimmed(spec.substr(7));
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
      throw ParseError("coeffs state needs the form coeffs:[re,im;re,im;...]");
    body = body.substr(1, body.size() - 2);
    std::vector<std::complex<double>> coeffs;
    std::istringstream items(body);
    std::string item;
    while (std::getline(items, item, ';')) {
      const size_t sep = item.find(',');
      if (sep == std::string::npos)
        throw ParseError("coeffs entries need the form re,im: '" + item + "'");
      coeffs.emplace_back(parse_double(item.substr(0, sep), "coeff re"),
                          parse_double(item.substr(sep + 1), "coeff im"));
    }
    if (coeffs.size() < 2) throw ParseError("coeffs state needs at least 2 entries");
    double norm = 0.0;
    for (const auto& c : coeffs) norm += std::norm(c);
    if (norm < 1e-14) throw ParseError("coeffs state has zero norm");
    norm = std::sqrt(norm);
    for (auto& c : coeffs) c /= norm;
    const int n = int(coeffs.size()) - 1;
    return state_from_coefficients(n, std::move(coeffs));
  }
  throw ParseError("unknown state spec: '" + spec + "'");
}

}  // namespace bqpe
