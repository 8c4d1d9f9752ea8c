#ifndef WCOH_ERRORS_HPP
#define WCOH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wcoh {

// Configuration / usage problems (bad flag, invalid parameter). CLI exit code 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Problems with the data itself (missing file, gap, bad value). CLI exit code 2.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wcoh

#endif
