import os
import sys

build_dir = os.environ.get("MACA_BUILD_DIR")
if build_dir:
    sys.path.insert(0, os.path.join(build_dir, "bindings"))
    repo_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
    sys.path.insert(0, os.path.join(repo_root, "python"))
