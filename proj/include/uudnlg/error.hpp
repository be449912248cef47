#ifndef UUDNLG_ERROR_HPP
#define UUDNLG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace uudnlg {

// Base class for every error raised by the toolkit. Batch commands catch this
// to report-and-skip; library callers may catch the derived types.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uudnlg

#endif  // UUDNLG_ERROR_HPP
