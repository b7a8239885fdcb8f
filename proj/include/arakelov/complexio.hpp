// Parsing and formatting of complex scalars.
//
// The CLI accepts complex numbers as "a+bi" literals ("i", "-i", "2i",
// "1.5", "0.4+1.3i", "1e-3-2.5e2i" are all valid). CSV output carries
// complex values as paired re/im columns, formatted with %.17g so that
// reruns of the same build are byte-identical.

#pragma once

#include <complex>
#include <string>

namespace arakelov {

using cd = std::complex<double>;

// Throws InputError on malformed input.
cd parse_complex(const std::string& text);

// Shortest %.17g round-trip form, e.g. "0.5-1.25i".
std::string format_complex(cd z);

// %.17g with C-locale decimal point.
std::string format_double(double x);

} // namespace arakelov
