#pragma once

#include <stdexcept>
#include <string>

namespace tiltlab {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class non_prime : public error { public: using error::error; };
class bad_ideal_exponent : public error { public: using error::error; };
class ring_mismatch : public error { public: using error::error; };
class spec_error : public error { public: using error::error; };
class parse_error : public error { public: using error::error; };
class level_out_of_range : public error { public: using error::error; };
class zero_depth : public error { public: using error::error; };
class insufficient_depth : public error { public: using error::error; };
class dimension_too_large : public error { public: using error::error; };
class enumeration_too_large : public error { public: using error::error; };
class torsion_present : public error { public: using error::error; };
class method_disagreement : public error { public: using error::error; };
class no_witness_in_range : public error { public: using error::error; };
class axiom_failure : public error { public: using error::error; };

}  // namespace tiltlab
