#pragma once

#include <stdexcept>
#include <string>

namespace mfrp {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid configuration or violated precondition.
struct ConfigError : Error {
  using Error::Error;
};

// A pseudo-vector draw was requested with a non-positive variance.
struct NonPositiveVariance : Error {
  using Error::Error;
};

// A computed covariance diagonal fell below the numeric floor.
struct DegenerateVariance : Error {
  using Error::Error;
};

// Covariance matrix indefinite beyond repair tolerance.
struct FactorizationFailure : Error {
  using Error::Error;
};

// Error raised inside the simulation loop, annotated with the step index.
struct SimulationError : Error {
  SimulationError(long step_index, const std::string& what)
      : Error("step " + std::to_string(step_index) + ": " + what),
        step(step_index) {}
  long step;
};

// Aggregation produced no output (input shorter than the window).
struct EmptyResult : Error {
  using Error::Error;
};

// A statistic that divides by the variance met a zero-variance input.
struct ZeroVariance : Error {
  using Error::Error;
};

// All increments at some lag were exactly zero.
struct DegenerateIncrements : Error {
  using Error::Error;
};

// Too few scales inside the requested fit range.
struct InsufficientRange : Error {
  using Error::Error;
};

// The requested wavelet scale does not fit the series.
struct ScaleTooLarge : Error {
  using Error::Error;
};

// File could not be read or written.
struct IoError : Error {
  using Error::Error;
};

}  // namespace mfrp
