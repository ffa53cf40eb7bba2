#include "gwa/types.hpp"

#include <sstream>
#include <stdexcept>

namespace gwa {

std::string history_to_string(const History& h) {
  std::string out = "<";
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (i) out += ",";
    out += h[i];
  }
  out += ">";
  return out;
}

std::string to_string(const InfosetKey& k) {
  return k.player + "#" + std::to_string(k.index);
}

Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) {
      return Rat(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: '" + s + "'");
  }
}

std::string rat_to_string(const Rat& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << "/" << denominator(r);
  return os.str();
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    out += v.code;
    out += ": ";
    out += v.message;
    out += "\n";
  }
  return out;
}

}  // namespace gwa
