#!/usr/bin/env python3
"""
Setup script for batchcolor
"""

import os
import subprocess
import sys
from pathlib import Path


def run_command(command, description):
    """Run a command and handle errors"""
    print(f"🔄 {description}...")
    try:
        subprocess.run(command, shell=True, check=True, capture_output=True, text=True)
        print(f"✅ {description} completed successfully")
        return True
    except subprocess.CalledProcessError as e:
        print(f"❌ {description} failed: {e.stderr}")
        return False


def main():
    print("🚀 Setting up batchcolor...")

    if sys.version_info < (3, 9):
        print("❌ Python 3.9 or higher is required")
        sys.exit(1)

    if not Path("venv").exists():
        if not run_command(f"{sys.executable} -m venv venv", "Creating virtual environment"):
            sys.exit(1)

    if os.name == 'nt':  # Windows
        python_cmd = "venv\\Scripts\\python"
    else:  # Unix/Linux/MacOS
        python_cmd = "venv/bin/python"

    if not run_command(f"{python_cmd} -m pip install -r requirements.txt", "Installing Python dependencies"):
        sys.exit(1)

    if not Path(".env").exists():
        if Path(".env.example").exists():
            run_command("copy .env.example .env" if os.name == 'nt' else "cp .env.example .env", "Creating .env file")
            print("📝 Edit .env to change oracle caps and adversary limits")
        else:
            print("⚠️  .env.example not found")

    print("\n🎉 Setup completed successfully!")
    print("\n📋 Next steps:")
    print(f"1. Run the tests:        {python_cmd} -m pytest -m 'not slow'")
    print(f"2. Play an adversary:    {python_cmd} -m batchcolor.main adversary --name interval-kt "
          "--params q=1 --algorithm two-batches")
    print(f"3. Solve an instance:    {python_cmd} -m batchcolor.main solve --algorithm first-fit "
          "--input instance.json")


if __name__ == "__main__":
    main()
