// Benchmarks live in benches/.
