"""
Process Tracker
Runs one external command with a timeout and kills its whole process tree
when the timeout fires
"""

import logging
import os
import subprocess
from dataclasses import dataclass
from typing import List, Optional

import psutil

logger = logging.getLogger("process_tracker")


@dataclass
class ProcessResult:
    returncode: Optional[int]
    stdout: str
    stderr: str
    timed_out: bool = False


class ProcessTracker:
    """
    Launches candidate programs and compilers. A program that outlives its
    timeout is killed together with every child it spawned, so a forking
    candidate cannot leave stray processes behind.
    """

    def kill_tree(self, pid: int):
        try:
            parent = psutil.Process(pid)
        except psutil.NoSuchProcess:
            return
        processes = parent.children(recursive=True) + [parent]
        for proc in processes:
            try:
                proc.kill()
            except psutil.NoSuchProcess:
                pass
        _, alive = psutil.wait_procs(processes, timeout=1.0)
        if alive:
            logger.warning(f"Processes still alive after kill: {[p.pid for p in alive]}")

    def run(self, command: List[str], cwd: str, stdin: str = "", timeout: float = 5.0) -> ProcessResult:
        """Run ``command``; FileNotFoundError propagates when the executable is missing"""
        process = subprocess.Popen(
            command,
            cwd=cwd,
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            encoding="utf-8",
            errors="replace",
            start_new_session=os.name == "posix",
        )
        try:
            stdout, stderr = process.communicate(stdin, timeout=timeout)
        except subprocess.TimeoutExpired:
            logger.debug(f"Timeout after {timeout}s: {command[0]} (pid {process.pid})")
            self.kill_tree(process.pid)
            stdout, stderr = process.communicate()
            return ProcessResult(None, stdout, stderr, timed_out=True)
        return ProcessResult(process.returncode, stdout, stderr)
