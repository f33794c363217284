from setuptools import setup

setup(
    name="hilbert_interp",
    version="0.1.0",
    package_dir={"": "src"},
    py_modules=[
        "errors",
        "karamata",
        "param",
        "certify",
        "expression",
        "power_iteration",
        "couple",
        "hormander",
        "elliptic",
        "fft_helpers",
        "charts",
        "config",
        "utils",
        "verification",
        "data_pipeline",
        "cli",
    ],
    python_requires=">=3.9",
    install_requires=[
        "mpmath",
        "numpy",
        "scipy",
        "pandas",
    ],
    entry_points={
        "console_scripts": [
            "hilbert-interp=cli:main",
        ],
    },
)
