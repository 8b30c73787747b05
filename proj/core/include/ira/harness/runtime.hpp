#pragma once

namespace ira::harness {

/// Keeps freed training temporaries in the heap instead of returning them to
/// the kernel after every minibatch. Call once at program start; a no-op
/// outside glibc.
void configure_allocator();

}  // namespace ira::harness
