// Copyright 2026 The ladri Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ladri
{

enum class ErrorKind
{
  InvalidState,
  InvalidScene,
  Config,
  InvalidInput,
  Model,
  Data,
  Stratify,
  Coverage,
  Parse,
  Schema,
  Version,
};

std::string_view to_string(ErrorKind kind);

/// Base of every exception thrown by the library. `kind()` is what the CLI
/// reports on stderr, so callers rarely need the concrete subclass.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & message)
  : std::runtime_error(message), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class ConfigError : public Error
{
public:
  ConfigError(std::string field, const std::string & message)
  : Error(ErrorKind::Config, field + ": " + message), field_(std::move(field))
  {
  }

  const std::string & field() const noexcept { return field_; }

private:
  std::string field_;
};

class ParseError : public Error
{
public:
  ParseError(std::size_t line, const std::string & message)
  : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + message), line_(line)
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class StratifyError : public Error
{
public:
  StratifyError(int label, const std::string & message)
  : Error(ErrorKind::Stratify, "class " + std::to_string(label) + ": " + message), label_(label)
  {
  }

  int label() const noexcept { return label_; }

private:
  int label_;
};

class CoverageError : public Error
{
public:
  CoverageError(int label, const std::string & message)
  : Error(ErrorKind::Coverage, "class " + std::to_string(label) + ": " + message), label_(label)
  {
  }

  int label() const noexcept { return label_; }

private:
  int label_;
};

}  // namespace ladri
