#pragma once

#include "mads/core.hpp"

#include <functional>
#include <string>

namespace mads {

/// Error raised inside a component, tagged with the component path
/// (e.g. "Mads/Iteration/Poll").
class ComponentError : public Error {
 public:
  ComponentError(ErrorCode code, std::string path, const std::string& what)
      : Error(code, path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Algorithmic component executed as Start, Run, End.
///
/// Components nest: a hook may build and execute child steps, which are run
/// depth-first. Each hook may be void.
class Step {
 public:
  explicit Step(std::string name, const Step* parent = nullptr)
      : name_(std::move(name)), parent_(parent) {}
  virtual ~Step() = default;

  void execute();

  const std::string& name() const { return name_; }
  const Step* parent() const { return parent_; }
  std::string path() const;

 protected:
  virtual void start() {}
  virtual void run() {}
  virtual void end() {}

 private:
  std::string name_;
  const Step* parent_;
};

/// Step assembled from callables, for ad-hoc composition.
class TaskStep : public Step {
 public:
  using Hook = std::function<void(const TaskStep&)>;

  TaskStep(std::string name, Hook start, Hook run, Hook end, const Step* parent = nullptr)
      : Step(std::move(name), parent),
        start_(std::move(start)),
        run_(std::move(run)),
        end_(std::move(end)) {}

 protected:
  void start() override {
    if (start_) start_(*this);
  }
  void run() override {
    if (run_) run_(*this);
  }
  void end() override {
    if (end_) end_(*this);
  }

 private:
  Hook start_, run_, end_;
};

}  // namespace mads
