#ifndef POCL_LOGGING_H
#define POCL_LOGGING_H

namespace pocl {

// stderr logger; level from POCL_LOG (off, info or trace), warnings otherwise.
void init_logging();

} // namespace pocl

#endif
