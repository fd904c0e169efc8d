#pragma once

#include <stdexcept>
#include <string>

namespace entbound {

// Base of every error raised by the library. Callers that only care about
// "something was wrong with the input" can catch this one type.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class incompatible_states : public error {
public:
  using error::error;
};

class degenerate_superposition : public error {
public:
  using error::error;
};

class invalid_density_matrix : public error {
public:
  using error::error;
};

class not_normalized : public error {
public:
  using error::error;
};

class invalid_argument : public error {
public:
  using error::error;
};

class resource_limit : public error {
public:
  using error::error;
};

class malformed_file : public error {
public:
  using error::error;
};

}  // namespace entbound
