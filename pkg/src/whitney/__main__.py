from whitney.cli import main

main()
