#include "qif/caps.hpp"

namespace qif {

Caps& caps() {
    static Caps c;
    return c;
}

} // namespace qif
