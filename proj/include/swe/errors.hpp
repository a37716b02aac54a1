#pragma once

#include <stdexcept>
#include <string>

namespace swe {

/// Base class for all errors raised by the solver stack.
class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (grid sizes, truncation mismatch, bad parameters).
class ConfigError : public Error
{
public:
	using Error::Error;
};

/// Non-finite or otherwise unusable input data.
class DataError : public Error
{
public:
	using Error::Error;
};

/// Malformed stepper identifier, CSV or config file.
class ParseError : public Error
{
public:
	using Error::Error;
};

/// Singular or numerically singular shifted linear system.
class SolverError : public Error
{
public:
	using Error::Error;
};

/// A time integration blew up (non-finite values or runaway geopotential).
class DivergenceError : public Error
{
public:
	using Error::Error;
};

}	// namespace swe
