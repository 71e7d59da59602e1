#include "mads/step.hpp"

namespace mads {

std::string Step::path() const {
  return parent_ ? parent_->path() + "/" + name_ : name_;
}

void Step::execute() {
  try {
    start();
    run();
    end();
  } catch (const ComponentError&) {
    throw;
  } catch (const Error& e) {
    throw ComponentError(e.code(), path(), e.what());
  }
}

}  // namespace mads
