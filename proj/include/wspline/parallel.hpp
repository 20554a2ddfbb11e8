#pragma once

namespace wspline {

/// Worker cap for the OpenMP kernels. 1 forces the serial path; 0 resets to
/// the hardware default. Outputs are bit-identical for any job count because
/// every parallel unit of work is independent and deterministic.
void set_max_jobs(int jobs);
int max_jobs();

} // namespace wspline
