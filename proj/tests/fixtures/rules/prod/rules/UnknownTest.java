package rules;

public class UnknownTest {
    public String describe() {
        return "UnknownTest";
    }
}
