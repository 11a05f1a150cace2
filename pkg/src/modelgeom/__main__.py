from modelgeom.cli import main

main()
