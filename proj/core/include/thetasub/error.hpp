#pragma once

#include <stdexcept>
#include <string>

namespace thetasub
{
//! Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Caller broke a documented precondition (mismatched inputs, bad move).
class ContractViolation : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

//! Invalid or inconsistent run/model configuration.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! Input data violates the model's requirements.
class DataError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

//! A path that cannot be rescaled into a bridge (final value not positive).
class DegenerateBridge : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace thetasub
