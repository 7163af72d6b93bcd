from setuptools import setup, find_packages
setup(
    name="spin_exchange",
    version="0.1.0",
    packages=find_packages(include=["src", "src.*"]),
    install_requires=["numpy", "scipy", "pandas"],
    extras_require={"test": ["pytest", "sympy"]},
)
