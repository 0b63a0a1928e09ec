import os
import subprocess
from glob import glob

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup


def eigen_include() -> str:
    try:
        out = subprocess.run(
            ["pkg-config", "--cflags-only-I", "eigen3"],
            capture_output=True,
            text=True,
            check=True,
        ).stdout
        for token in out.split():
            if token.startswith("-I"):
                return token[2:]
    except (OSError, subprocess.CalledProcessError):
        pass
    return "/usr/include/eigen3"


ParallelCompile("FIG_BUILD_JOBS", default=os.cpu_count() or 1).install()

core = Pybind11Extension(
    "fig._core",
    sorted(glob("src/*.cpp")) + ["python/bindings.cpp"],
    include_dirs=["include", eigen_include()],
    libraries=["crypto"],
    cxx_std=20,
)
core.extra_compile_args.append("-pthread")
core.extra_link_args.append("-pthread")

setup(ext_modules=[core], cmdclass={"build_ext": build_ext})
