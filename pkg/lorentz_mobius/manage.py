import os
import sys

# hyphenated spellings of the geometry commands
ALIASES = {
    "verify-pushforward": "verify_pushforward",
    "sphere-check": "sphere_check",
    "ovaloid-search": "ovaloid_search",
}


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "core.settings.dev")
    from django.core.management import execute_from_command_line

    argv = list(sys.argv)
    if len(argv) > 1:
        argv[1] = ALIASES.get(argv[1], argv[1])
    execute_from_command_line(argv)


if __name__ == "__main__":
    main()
