package rules;

public class VerboseTest {
    public String describe() {
        return "VerboseTest";
    }
}
