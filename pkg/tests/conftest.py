import os

# The Monte Carlo hot loop is many small-matrix eigendecompositions; BLAS
# threading is counterproductive there (measured 2x slower), and it fights
# the library's chunk-level thread pool.  Pin it before numpy loads.
os.environ.setdefault("OMP_NUM_THREADS", "1")
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("MKL_NUM_THREADS", "1")
