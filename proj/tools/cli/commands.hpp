#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "stylebasis/tensor.hpp"

namespace stylebasis::cli {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 success, 1 usage, 2 data, 3 numeric.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Built-in content/style pair: a flat-shaded landscape and a pen-hatching
/// sketch, both size x size.
ImageTensor demo_content(std::size_t size);
ImageTensor demo_style(std::size_t size);

}  // namespace stylebasis::cli
