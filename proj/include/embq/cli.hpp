#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace embq {

/// Exit codes: 0 positive answer/success, 1 negative answer, 2 usage or
/// I/O error, 3 resource cap exceeded.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             std::istream& in);

} // namespace embq
