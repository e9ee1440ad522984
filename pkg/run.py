#!/usr/bin/env python3
"""
mhsolve - Launch Script
Checks dependencies, then runs a solver command or the test suite.

    python run.py solve -i systems/ex37.json --seed 1
    python run.py --tests
"""

import subprocess
import sys
import os


def check_dependencies():
    """Check if required packages are installed."""
    required = ['sympy', 'numpy', 'python-dotenv', 'pytest', 'hypothesis']
    modules = {'python-dotenv': 'dotenv'}
    missing = []

    for package in required:
        try:
            __import__(modules.get(package, package.replace('-', '_')))
        except ImportError:
            missing.append(package)

    return missing


def install_dependencies():
    """Install missing dependencies."""
    print("Installing dependencies from requirements.txt...", file=sys.stderr)
    result = subprocess.run(
        [sys.executable, "-m", "pip", "install", "-r", "requirements.txt"],
        capture_output=True,
        text=True
    )

    if result.returncode == 0:
        print("Dependencies installed.", file=sys.stderr)
        return True
    print("Failed to install dependencies:", file=sys.stderr)
    print(result.stderr, file=sys.stderr)
    return False


def run_tests():
    """Run the test suite."""
    result = subprocess.run([sys.executable, "-m", "pytest", "tests/", "-v"])
    return result.returncode == 0


def main(argv=None):
    """Main entry point."""
    argv = list(sys.argv[1:] if argv is None else argv)

    # Check if we're in the right directory
    if not os.path.exists("src/cli.py"):
        print("Error: run this script from the project root", file=sys.stderr)
        print("Current directory:", os.getcwd(), file=sys.stderr)
        return 1

    missing = check_dependencies()
    if missing:
        print(f"Missing dependencies: {', '.join(missing)}", file=sys.stderr)
        if "--install-deps" not in argv or not install_dependencies():
            print("Install them with: python run.py --install-deps ...", file=sys.stderr)
            return 1
    argv = [a for a in argv if a != "--install-deps"]

    if argv[:1] == ["--tests"]:
        return 0 if run_tests() else 1

    from src.cli import main as cli_main
    return cli_main(argv)


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
